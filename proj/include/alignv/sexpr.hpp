#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "alignv/logic.hpp"

namespace alignv {

struct SExpr {
  enum class Kind : std::uint8_t { Atom, String, List };
  Kind kind = Kind::List;
  std::string text;
  std::vector<SExpr> items;
  int line = 1;

  static SExpr atom(std::string s) { return {Kind::Atom, std::move(s), {}, 1}; }
  static SExpr str(std::string s) { return {Kind::String, std::move(s), {}, 1}; }
  static SExpr list(std::vector<SExpr> xs) { return {Kind::List, {}, std::move(xs), 1}; }

  bool isAtom(std::string_view s) const { return kind == Kind::Atom && text == s; }
};

// Parses exactly one s-expression (`;` starts a comment); throws ParseError.
SExpr parseSExpr(std::string_view text);
// Lists whose head is `rule` or `premises` are broken over lines.
std::string toString(const SExpr& e, int indent = 0);

// (rule NAME (domain LO HI) (concl (unary "c" "P" "Q") | (rel "c" "c'" "R" "S"))
//   (side ("lhs" "rhs") ...) (params "L" "R") (premises (rule ...) ...))
// Commands use the labelled single-line syntax, formulas the assertion
// syntax of the judgment's kind.
SExpr toSExpr(const Derivation& d);
Derivation derivationFromSExpr(const SExpr& e);
std::string writeDerivation(const Derivation& d);
Derivation readDerivation(std::string_view text);

}  // namespace alignv
