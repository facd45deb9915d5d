#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace finicheck {

/// A runtime value: integer, boolean, array, set or tuple. Aggregate values
/// share their element storage; mutation always goes through copies.
class Value {
public:
  enum class Kind { Int, Bool, Array, Set, Tuple };

  Value() : kind_(Kind::Int), num_(0) {}

  static Value of_int(long long v) {
    Value x;
    x.kind_ = Kind::Int;
    x.num_ = v;
    return x;
  }
  static Value of_bool(bool v) {
    Value x;
    x.kind_ = Kind::Bool;
    x.num_ = v ? 1 : 0;
    return x;
  }
  static Value array(std::vector<Value> items);
  static Value tuple(std::vector<Value> items);
  /// Sorts and deduplicates the elements.
  static Value set(std::vector<Value> items);

  Kind kind() const { return kind_; }
  long long as_int() const { return num_; }
  bool as_bool() const { return num_ != 0; }
  const std::vector<Value>& items() const { return *items_; }
  size_t size() const { return items_ ? items_->size() : 0; }

  /// Set membership by binary search over the sorted representation.
  bool contains(const Value& v) const;

  /// Copy with one array slot replaced.
  Value with_item(size_t index, Value v) const;

  /// Total order used for canonical set storage and deterministic output.
  static int compare(const Value& a, const Value& b);

  bool operator==(const Value& other) const { return compare(*this, other) == 0; }
  bool operator!=(const Value& other) const { return !(*this == other); }
  bool operator<(const Value& other) const { return compare(*this, other) < 0; }

  std::string to_string(bool ascii = false) const;

private:
  Kind kind_;
  long long num_ = 0;
  std::shared_ptr<const std::vector<Value>> items_;
};

}  // namespace finicheck
