#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace alignv {

using Value = std::int64_t;

// Finite map from variable names to integers. Variables that are not bound
// read as 0, so two stores that differ only in explicit zero bindings are
// still distinct values; callers that need canonical stores bind a fixed
// footprint.
class Store {
 public:
  using Map = std::map<std::string, Value, std::less<>>;

  Store() = default;
  Store(std::initializer_list<std::pair<const std::string, Value>> init) : vals_(init) {}
  explicit Store(Map m) : vals_(std::move(m)) {}

  Value get(std::string_view name) const {
    auto it = vals_.find(name);
    return it == vals_.end() ? 0 : it->second;
  }
  bool binds(std::string_view name) const { return vals_.find(name) != vals_.end(); }
  void set(const std::string& name, Value v) { vals_[name] = v; }
  Store updated(const std::string& name, Value v) const {
    Store s = *this;
    s.set(name, v);
    return s;
  }

  const Map& bindings() const { return vals_; }
  bool empty() const { return vals_.empty(); }
  std::size_t hash() const;

  friend bool operator==(const Store&, const Store&) = default;
  friend auto operator<=>(const Store& a, const Store& b) { return a.vals_ <=> b.vals_; }

 private:
  Map vals_;
};

std::ostream& operator<<(std::ostream& os, const Store& s);
std::string toString(const Store& s);

inline std::size_t hashCombine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace alignv

template <>
struct std::hash<alignv::Store> {
  std::size_t operator()(const alignv::Store& s) const noexcept { return s.hash(); }
};
