#pragma once

#include <compare>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "alignv/store.hpp"

namespace alignv {

// Raised when an operation is applied outside its precondition (arity
// mismatch, label not in program, empty domain, ...).
class DomainError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Side : std::uint8_t { Plain, Left, Right };

struct VarRef {
  std::string name;
  Side side = Side::Plain;

  friend bool operator==(const VarRef&, const VarRef&) = default;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

std::string toString(const VarRef& v);

enum class Op : std::uint8_t { Add, Sub, Mul, Mod, Eq, Ne, Lt, Le, Gt, Ge, Implies };

bool isComparison(Op op);
const char* opSymbol(Op op);
Value applyOp(Op op, Value a, Value b);

// An explicit finite relation over a fixed list of variables: a tuple of
// values for `vars()` is a member iff it is one of the rows. Columns are kept
// sorted by variable so equal relations compare equal.
class StoreSet {
 public:
  StoreSet(std::vector<VarRef> vars, std::vector<std::vector<Value>> rows);

  const std::vector<VarRef>& vars() const { return vars_; }
  std::size_t width() const { return vars_.size(); }
  std::size_t size() const { return rows_; }
  std::span<const Value> row(std::size_t i) const {
    return {cells_.data() + i * vars_.size(), vars_.size()};
  }
  bool contains(std::span<const Value> tuple) const;
  std::size_t hash() const { return hash_; }

  friend bool operator==(const StoreSet& a, const StoreSet& b) {
    return a.hash_ == b.hash_ && a.vars_ == b.vars_ && a.rows_ == b.rows_ && a.cells_ == b.cells_;
  }

 private:
  std::vector<VarRef> vars_;
  std::vector<Value> cells_;
  std::size_t rows_ = 0;
  std::size_t hash_ = 0;
};

// Immutable expression/formula tree shared by programs and assertions.
// Conjunction and disjunction are n-ary; `Subst` only ever wraps an
// extensional set (substitution into any other node is performed eagerly).
class Expr {
 public:
  enum class Kind : std::uint8_t { Lit, Var, Binary, Not, And, Or, Set, Subst };
  using Binding = std::pair<VarRef, Expr>;

  Expr();

  static Expr lit(Value v);
  static Expr truth(bool b) { return lit(b ? 1 : 0); }
  static Expr var(VarRef v);
  static Expr var(std::string name, Side side = Side::Plain) { return var(VarRef{std::move(name), side}); }
  static Expr binary(Op op, Expr l, Expr r);
  static Expr negate(Expr e);
  static Expr conj(std::vector<Expr> args);
  static Expr disj(std::vector<Expr> args);
  static Expr set(std::shared_ptr<const StoreSet> s);
  // Canonicalizing: composes nested substitutions, drops identity and
  // irrelevant bindings, and substitutes eagerly into non-set bodies.
  static Expr subst(const Expr& body, std::vector<Binding> bindings);

  Kind kind() const;
  Value value() const;
  const VarRef& var() const;
  Op op() const;
  const std::vector<Expr>& args() const;
  const Expr& lhs() const { return args()[0]; }
  const Expr& rhs() const { return args()[1]; }
  const StoreSet& set() const;
  const std::shared_ptr<const StoreSet>& setPtr() const;
  const std::vector<Binding>& bindings() const;

  bool isLit(Value v) const { return kind() == Kind::Lit && value() == v; }
  std::size_t hash() const;
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);
  std::shared_ptr<const Node> node_;
};

using Substitution = std::vector<Expr::Binding>;

std::strong_ordering compare(const Expr& a, const Expr& b);

Expr mkAnd(Expr a, Expr b);
Expr mkOr(Expr a, Expr b);
Expr mkNot(Expr a);
Expr mkImplies(Expr a, Expr b);
Expr mkBin(Op op, Expr a, Expr b);

// Simultaneous capture-free substitution.
Expr substitute(const Expr& e, const Substitution& sigma);
Expr mapVars(const Expr& e, const std::function<VarRef(const VarRef&)>& f);
void collectFreeVars(const Expr& e, std::set<VarRef>& out);
std::set<VarRef> freeVars(const Expr& e);

// True for nodes whose value is always 0 or 1.
bool isBoolValued(const Expr& e);

// Truth-preserving normal form: constant folding, flattened/sorted/deduped
// conjunctions and disjunctions, `->` rewritten to `||`, negated comparisons
// flipped, `>`/`>=` oriented as `<`/`<=`.
Expr normalize(const Expr& e);
// Value-preserving variant for arithmetic positions.
Expr normalizeValue(const Expr& e);

// Top-level conjuncts of a normalized formula.
std::vector<Expr> conjuncts(const Expr& e);

struct Env {
  const Store* left = nullptr;   // Plain and Left variables
  const Store* right = nullptr;  // Right variables
};

Value evaluate(const Expr& e, const Env& env);
inline bool truthy(const Expr& e, const Env& env) { return evaluate(e, env) != 0; }

std::string toString(const Expr& e);
// Formula rendering prints boolean-position literals as true/false.
std::string toFormulaString(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

}  // namespace alignv

template <>
struct std::hash<alignv::Expr> {
  std::size_t operator()(const alignv::Expr& e) const noexcept { return e.hash(); }
};

template <>
struct std::hash<alignv::VarRef> {
  std::size_t operator()(const alignv::VarRef& v) const noexcept {
    return alignv::hashCombine(std::hash<std::string>{}(v.name), static_cast<std::size_t>(v.side));
  }
};
