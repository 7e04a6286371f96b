#pragma once

#include <compare>
#include <functional>
#include <string>

#include "alignv/store.hpp"

namespace alignv {

using Label = int;

// Auxiliary control state carried by tagged products (lck/lo/ro) and by the
// dovetail product (a single bit).
enum class Tag : std::uint8_t { None, Lck, Lo, Ro, Bit0, Bit1 };

const char* tagName(Tag t);

// Control point of a program automaton (a label) or of a product (a pair of
// labels, optionally tagged).
struct Point {
  Label left = 0;
  Label right = 0;
  Tag tag = Tag::None;
  bool paired = false;

  static Point unary(Label n) { return Point{n, 0, Tag::None, false}; }
  static Point pair(Label n, Label m, Tag t = Tag::None) { return Point{n, m, t, true}; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

std::string toString(const Point& p);

}  // namespace alignv

template <>
struct std::hash<alignv::Point> {
  std::size_t operator()(const alignv::Point& p) const noexcept {
    std::size_t h = std::hash<int>{}(p.left);
    h = alignv::hashCombine(h, std::hash<int>{}(p.right));
    h = alignv::hashCombine(h, static_cast<std::size_t>(p.tag) * 2 + (p.paired ? 1 : 0));
    return h;
  }
};
