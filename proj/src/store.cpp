#include "alignv/store.hpp"

#include <sstream>

namespace alignv {

std::size_t Store::hash() const {
  std::size_t h = 0x51ed;
  for (const auto& [k, v] : vals_) {
    h = hashCombine(h, std::hash<std::string>{}(k));
    h = hashCombine(h, std::hash<Value>{}(v));
  }
  return h;
}

std::ostream& operator<<(std::ostream& os, const Store& s) {
  os << '{';
  bool first = true;
  for (const auto& [k, v] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << k << '=' << v;
  }
  return os << '}';
}

std::string toString(const Store& s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace alignv
