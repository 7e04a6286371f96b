#pragma once

#include <string>

#include "alignv/assertion.hpp"
#include "alignv/lang.hpp"

namespace alignv {

// c : {P}{Q} or c | c' : <R><S>.
struct Judgment {
  bool relational = false;
  CommandPtr left;
  CommandPtr right;
  Formula pre;
  Formula post;

  static Judgment unary(CommandPtr c, Formula p, Formula q);
  static Judgment rel(CommandPtr c, CommandPtr d, Formula r, Formula s);
};

// Same commands (labels included) and normalized-equal formulas.
bool operator==(const Judgment& a, const Judgment& b);
// Same commands up to labels and normalized-equal formulas.
bool sameModuloLabels(const Judgment& a, const Judgment& b);
std::size_t hashJudgment(const Judgment& j);

std::string toString(const Judgment& j);

}  // namespace alignv

template <>
struct std::hash<alignv::Judgment> {
  std::size_t operator()(const alignv::Judgment& j) const noexcept { return alignv::hashJudgment(j); }
};
