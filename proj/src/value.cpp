#include "finicheck/value.hpp"

#include <algorithm>
#include <sstream>

namespace finicheck {

Value Value::array(std::vector<Value> items) {
  Value x;
  x.kind_ = Kind::Array;
  x.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
  return x;
}

Value Value::tuple(std::vector<Value> items) {
  Value x;
  x.kind_ = Kind::Tuple;
  x.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
  return x;
}

Value Value::set(std::vector<Value> items) {
  std::sort(items.begin(), items.end(),
            [](const Value& a, const Value& b) { return compare(a, b) < 0; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const Value& a, const Value& b) {
                            return compare(a, b) == 0;
                          }),
              items.end());
  Value x;
  x.kind_ = Kind::Set;
  x.items_ = std::make_shared<const std::vector<Value>>(std::move(items));
  return x;
}

bool Value::contains(const Value& v) const {
  const auto& xs = items();
  auto it = std::lower_bound(
      xs.begin(), xs.end(), v,
      [](const Value& a, const Value& b) { return compare(a, b) < 0; });
  return it != xs.end() && compare(*it, v) == 0;
}

Value Value::with_item(size_t index, Value v) const {
  std::vector<Value> copy = items();
  copy[index] = std::move(v);
  Value x;
  x.kind_ = kind_;
  x.items_ = std::make_shared<const std::vector<Value>>(std::move(copy));
  return x;
}

int Value::compare(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_)
    return static_cast<int>(a.kind_) < static_cast<int>(b.kind_) ? -1 : 1;
  switch (a.kind_) {
    case Kind::Int:
    case Kind::Bool:
      return a.num_ < b.num_ ? -1 : (a.num_ > b.num_ ? 1 : 0);
    default: {
      const auto& xs = a.items();
      const auto& ys = b.items();
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (size_t i = 0; i < xs.size(); ++i) {
        int c = compare(xs[i], ys[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
}

std::string Value::to_string(bool ascii) const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Int:
      out << num_;
      break;
    case Kind::Bool:
      out << (num_ ? "true" : "false");
      break;
    case Kind::Array:
    case Kind::Set:
    case Kind::Tuple: {
      const char* open = kind_ == Kind::Array ? "[" : kind_ == Kind::Set ? "{" : (ascii ? "<<" : "⟨");
      const char* close = kind_ == Kind::Array ? "]" : kind_ == Kind::Set ? "}" : (ascii ? ">>" : "⟩");
      out << open;
      for (size_t i = 0; i < items().size(); ++i) {
        if (i) out << ",";
        out << items()[i].to_string(ascii);
      }
      out << close;
      break;
    }
  }
  return out.str();
}

}  // namespace finicheck
