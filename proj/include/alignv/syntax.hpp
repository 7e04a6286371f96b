#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alignv/expr.hpp"
#include "alignv/lang.hpp"
#include "alignv/point.hpp"

namespace alignv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// How identifiers in assertion text are read. In relational text a bare
// identifier is a left variable and a primed one a right variable; in unary
// text the prime is part of the name (the dotted copy of a variable).
enum class FormulaMode : std::uint8_t { Unary, Relational };

struct Domain {
  Value lo = -8;
  Value hi = 8;

  std::size_t size() const { return hi < lo ? 0 : static_cast<std::size_t>(hi - lo) + 1; }
  friend bool operator==(const Domain&, const Domain&) = default;
};

std::string toString(const Domain& d);

// Parses a `.imp` program; unlabelled commands receive the smallest unused
// positive labels in preorder.
Program parseProgram(std::string_view source);
// Parses a labelled command (as printed by toString(Command)); with
// `allowPrimed` identifiers may carry primes and labels may repeat (the
// commands of derivations, such as c; dot(d), need not satisfy ok).
CommandPtr parseCommand(std::string_view source, bool allowPrimed = false);
Expr parseExpr(std::string_view source);
Expr parseFormulaText(std::string_view source, FormulaMode mode);
Domain parseDomain(std::string_view text);
Point parsePoint(std::string_view text);

struct AnnotationFile {
  std::optional<Expr> pre;
  std::optional<Expr> post;
  std::optional<Domain> domain;
  std::vector<std::pair<Point, Expr>> entries;
};

AnnotationFile parseAnnotationFile(std::string_view text, FormulaMode mode);
std::string formatAnnotationFile(const AnnotationFile& file);

}  // namespace alignv
