#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "finicheck/value.hpp"

namespace finicheck {

struct TypeDen;
using DenPtr = std::shared_ptr<const TypeDen>;

/// A resolved, finite type denotation. Integer denotations may lack a range
/// only for unbounded `val` constants and intermediate arithmetic; such
/// denotations have no carrier.
struct TypeDen {
  enum class Kind { Bool, Int, Array, Set, Tuple };

  Kind kind = Kind::Int;
  bool has_range = false;
  long long lo = 0, hi = 0;    // Int with range
  long long len = 0;           // Array
  DenPtr elem;                 // Array, Set
  std::vector<DenPtr> comps;   // Tuple

  static DenPtr boolean();
  static DenPtr integer();  // unbounded
  static DenPtr int_range(long long lo, long long hi);
  static DenPtr array(long long len, DenPtr elem);
  static DenPtr set(DenPtr elem);
  static DenPtr tuple(std::vector<DenPtr> comps);
};

/// Exact structural equality (ranges included).
bool same_den(const TypeDen& a, const TypeDen& b);

/// Shape compatibility: integer ranges are ignored (range enforcement is a
/// runtime concern), array lengths and aggregate structure must agree.
bool compatible_den(const TypeDen& a, const TypeDen& b);

/// True when every value of the denotation can be enumerated.
bool is_enumerable(const TypeDen& den);

/// Number of values inhabiting the denotation. Throws CarrierOverflowError
/// when the count exceeds 64-bit capacity instead of wrapping.
uint64_t carrier_size(const TypeDen& den);

/// The index-th value of the canonical enumeration:
/// booleans false then true; integers ascending; arrays and tuples as
/// mixed-radix counters with position 0 varying fastest; sets by subset
/// bitmask with element 0 as the lowest bit.
Value carrier_value_at(const TypeDen& den, uint64_t index);

/// Runtime range check used at variable bindings and assignments.
bool value_fits(const TypeDen& den, const Value& v);

/// Full rendering, e.g. "Array[4, ℤ[-3,3]]".
std::string den_to_string(const TypeDen& den, bool ascii = false);

/// Compact symbol used in run-report headers, e.g. "ℤ" for any integer type.
std::string den_symbol(const TypeDen& den, bool ascii = false);

/// Lazy enumeration of a carrier: yields values in canonical order while the
/// callback returns true. Returns false when the consumer stopped early.
template <typename Fn>
bool enumerate(const TypeDen& den, Fn&& fn) {
  uint64_t n = carrier_size(den);
  for (uint64_t i = 0; i < n; ++i)
    if (!fn(carrier_value_at(den, i))) return false;
  return true;
}

}  // namespace finicheck
