#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alignv/enumerate.hpp"
#include "alignv/expr.hpp"
#include "alignv/store.hpp"
#include "alignv/syntax.hpp"

namespace alignv {

// Neutral formulas mention no variables and can be used as either kind.
enum class Arity : std::uint8_t { Neutral, Unary, Relational };

const char* arityName(Arity a);

// Throws DomainError for a formula that mixes unary and relational variables.
Arity arityOf(const Expr& e);

// Unary formulas read Plain variables of one store; relational formulas read
// Left and Right variables of a pair of stores.
class Formula {
 public:
  Formula() : e_(Expr::truth(true)), arity_(Arity::Neutral) {}
  explicit Formula(Expr e);

  static Formula truth() { return Formula(); }
  static Formula falsity() { return Formula(Expr::truth(false)); }

  const Expr& expr() const { return e_; }
  Arity arity() const { return arity_; }
  bool isTrue() const { return e_.isLit(1); }
  bool isFalse() const { return e_.isLit(0); }
  std::size_t hash() const { return e_.hash(); }

  friend bool operator==(const Formula& a, const Formula& b) { return a.e_ == b.e_; }

 private:
  Expr e_;
  Arity arity_;
};

Formula parseFormula(std::string_view text, FormulaMode mode);
std::string toString(const Formula& f);

Formula conj(const Formula& a, const Formula& b);
Formula conj(const std::vector<Formula>& fs);
Formula disj(const Formula& a, const Formula& b);
Formula neg(const Formula& a);
Formula implies(const Formula& a, const Formula& b);
Formula normalized(const Formula& f);
// Equal after normalization.
bool sameFormula(const Formula& a, const Formula& b);

// Program expression seen through the left or right store.
Expr toLeft(const Expr& e);
Expr toRight(const Expr& e);

Formula leftOf(const Expr& e);
Formula rightOf(const Expr& e);
// agree(e, e'): e on the left equals e' on the right.
Formula agree(const Expr& e, const Expr& e2);
// bagree(e, e'): e on the left and e' on the right have the same truth value.
Formula bagree(const Expr& e, const Expr& e2);

bool holdsU(const Formula& p, const Store& s);
bool holdsR(const Formula& r, const Store& s, const Store& t);

// P[x := e] for a unary formula.
Formula substU(const Formula& p, const std::string& x, const Expr& e);

struct SideAssign {
  std::string var;
  Expr value;  // program expression, read on the same side
};

// R[x|x' := e|e'] with an optional update on each side.
Formula substR(const Formula& r, const std::optional<SideAssign>& left, const std::optional<SideAssign>& right);

// Unary encoding of a relational formula over the combined store s + dot(t):
// left variables keep their name, right variables become primed names.
Formula encodePlus(const Formula& r);
// Inverse of encodePlus on names with at most one trailing prime.
Formula decodePlus(const Formula& p);
Store mergePlus(const Store& s, const Store& t);

struct Witness {
  Store left;
  Store right;
};

struct ImplicationResult {
  bool holds = true;
  std::optional<Witness> witness;
};

// Decides `f => g` over the bounded domain by enumerating every store
// assigning the free variables of both formulas a value of `dom` (or a row of
// an extensional conjunct of f). Witness stores are split by side; unary
// formulas report their witness as `left`.
ImplicationResult impliesBounded(const Formula& f, const Formula& g, const Domain& dom, Exec exec = defaultExec());
bool validBounded(const Formula& f, const Domain& dom, Exec exec = defaultExec());

// Splits an assignment over plan slots back into stores.
Witness splitAssignment(const SlotMap& slots, const Assignment& a);

}  // namespace alignv

template <>
struct std::hash<alignv::Formula> {
  std::size_t operator()(const alignv::Formula& f) const noexcept { return f.hash(); }
};
