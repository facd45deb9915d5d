#include "finicheck/types.hpp"

#include <sstream>

#include "finicheck/errors.hpp"

namespace finicheck {

DenPtr TypeDen::boolean() {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Bool;
  return d;
}

DenPtr TypeDen::integer() {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Int;
  d->has_range = false;
  return d;
}

DenPtr TypeDen::int_range(long long lo, long long hi) {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Int;
  d->has_range = true;
  d->lo = lo;
  d->hi = hi;
  return d;
}

DenPtr TypeDen::array(long long len, DenPtr elem) {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Array;
  d->len = len;
  d->elem = std::move(elem);
  return d;
}

DenPtr TypeDen::set(DenPtr elem) {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Set;
  d->elem = std::move(elem);
  return d;
}

DenPtr TypeDen::tuple(std::vector<DenPtr> comps) {
  auto d = std::make_shared<TypeDen>();
  d->kind = Kind::Tuple;
  d->comps = std::move(comps);
  return d;
}

bool same_den(const TypeDen& a, const TypeDen& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeDen::Kind::Bool:
      return true;
    case TypeDen::Kind::Int:
      return a.has_range == b.has_range &&
             (!a.has_range || (a.lo == b.lo && a.hi == b.hi));
    case TypeDen::Kind::Array:
      return a.len == b.len && same_den(*a.elem, *b.elem);
    case TypeDen::Kind::Set:
      return same_den(*a.elem, *b.elem);
    case TypeDen::Kind::Tuple: {
      if (a.comps.size() != b.comps.size()) return false;
      for (size_t i = 0; i < a.comps.size(); ++i)
        if (!same_den(*a.comps[i], *b.comps[i])) return false;
      return true;
    }
  }
  return false;
}

bool compatible_den(const TypeDen& a, const TypeDen& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeDen::Kind::Bool:
    case TypeDen::Kind::Int:
      return true;
    case TypeDen::Kind::Array:
      return a.len == b.len && compatible_den(*a.elem, *b.elem);
    case TypeDen::Kind::Set:
      return compatible_den(*a.elem, *b.elem);
    case TypeDen::Kind::Tuple: {
      if (a.comps.size() != b.comps.size()) return false;
      for (size_t i = 0; i < a.comps.size(); ++i)
        if (!compatible_den(*a.comps[i], *b.comps[i])) return false;
      return true;
    }
  }
  return false;
}

bool is_enumerable(const TypeDen& den) {
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      return true;
    case TypeDen::Kind::Int:
      return den.has_range;
    case TypeDen::Kind::Array:
    case TypeDen::Kind::Set:
      return is_enumerable(*den.elem);
    case TypeDen::Kind::Tuple:
      for (const auto& c : den.comps)
        if (!is_enumerable(*c)) return false;
      return true;
  }
  return false;
}

namespace {

uint64_t checked_mul(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw CarrierOverflowError("carrier size exceeds 64-bit capacity");
  return r;
}

uint64_t checked_pow(uint64_t base, uint64_t exp) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

}  // namespace

uint64_t carrier_size(const TypeDen& den) {
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      return 2;
    case TypeDen::Kind::Int: {
      if (!den.has_range)
        throw CarrierOverflowError("unbounded integer type has no carrier");
      // lo <= hi is established at resolution
      return static_cast<uint64_t>(den.hi - den.lo) + 1;
    }
    case TypeDen::Kind::Array:
      return checked_pow(carrier_size(*den.elem),
                         static_cast<uint64_t>(den.len));
    case TypeDen::Kind::Set: {
      uint64_t n = carrier_size(*den.elem);
      if (n >= 64)
        throw CarrierOverflowError("carrier size exceeds 64-bit capacity");
      return uint64_t{1} << n;
    }
    case TypeDen::Kind::Tuple: {
      uint64_t r = 1;
      for (const auto& c : den.comps) r = checked_mul(r, carrier_size(*c));
      return r;
    }
  }
  return 0;
}

Value carrier_value_at(const TypeDen& den, uint64_t index) {
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      return Value::of_bool(index != 0);
    case TypeDen::Kind::Int:
      return Value::of_int(den.lo + static_cast<long long>(index));
    case TypeDen::Kind::Array: {
      uint64_t radix = carrier_size(*den.elem);
      std::vector<Value> items;
      items.reserve(static_cast<size_t>(den.len));
      for (long long i = 0; i < den.len; ++i) {
        items.push_back(carrier_value_at(*den.elem, index % radix));
        index /= radix;
      }
      return Value::array(std::move(items));
    }
    case TypeDen::Kind::Set: {
      std::vector<Value> items;
      uint64_t n = carrier_size(*den.elem);
      for (uint64_t bit = 0; bit < n; ++bit)
        if (index & (uint64_t{1} << bit))
          items.push_back(carrier_value_at(*den.elem, bit));
      return Value::set(std::move(items));
    }
    case TypeDen::Kind::Tuple: {
      std::vector<Value> items;
      items.reserve(den.comps.size());
      for (const auto& c : den.comps) {
        uint64_t radix = carrier_size(*c);
        items.push_back(carrier_value_at(*c, index % radix));
        index /= radix;
      }
      return Value::tuple(std::move(items));
    }
  }
  return Value();
}

bool value_fits(const TypeDen& den, const Value& v) {
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      return v.kind() == Value::Kind::Bool;
    case TypeDen::Kind::Int:
      return v.kind() == Value::Kind::Int &&
             (!den.has_range || (den.lo <= v.as_int() && v.as_int() <= den.hi));
    case TypeDen::Kind::Array: {
      if (v.kind() != Value::Kind::Array ||
          v.size() != static_cast<size_t>(den.len))
        return false;
      for (const auto& item : v.items())
        if (!value_fits(*den.elem, item)) return false;
      return true;
    }
    case TypeDen::Kind::Set: {
      if (v.kind() != Value::Kind::Set) return false;
      for (const auto& item : v.items())
        if (!value_fits(*den.elem, item)) return false;
      return true;
    }
    case TypeDen::Kind::Tuple: {
      if (v.kind() != Value::Kind::Tuple || v.size() != den.comps.size())
        return false;
      for (size_t i = 0; i < den.comps.size(); ++i)
        if (!value_fits(*den.comps[i], v.items()[i])) return false;
      return true;
    }
  }
  return false;
}

std::string den_to_string(const TypeDen& den, bool ascii) {
  std::ostringstream out;
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      out << "Bool";
      break;
    case TypeDen::Kind::Int:
      if (den.has_range)
        out << (ascii ? "Int" : "ℤ") << "[" << den.lo << "," << den.hi << "]";
      else
        out << (ascii ? "Int" : "ℤ");
      break;
    case TypeDen::Kind::Array:
      out << "Array[" << den.len << ", " << den_to_string(*den.elem, ascii)
          << "]";
      break;
    case TypeDen::Kind::Set:
      out << "Set[" << den_to_string(*den.elem, ascii) << "]";
      break;
    case TypeDen::Kind::Tuple: {
      out << "Tuple[";
      for (size_t i = 0; i < den.comps.size(); ++i) {
        if (i) out << ", ";
        out << den_to_string(*den.comps[i], ascii);
      }
      out << "]";
      break;
    }
  }
  return out.str();
}

std::string den_symbol(const TypeDen& den, bool ascii) {
  switch (den.kind) {
    case TypeDen::Kind::Bool:
      return "Bool";
    case TypeDen::Kind::Int:
      return ascii ? "Int" : "ℤ";
    case TypeDen::Kind::Array:
      return "Array[" + std::to_string(den.len) + "," +
             den_symbol(*den.elem, ascii) + "]";
    case TypeDen::Kind::Set:
      return "Set[" + den_symbol(*den.elem, ascii) + "]";
    case TypeDen::Kind::Tuple: {
      std::string s = "Tuple[";
      for (size_t i = 0; i < den.comps.size(); ++i) {
        if (i) s += ",";
        s += den_symbol(*den.comps[i], ascii);
      }
      return s + "]";
    }
  }
  return "?";
}

}  // namespace finicheck
