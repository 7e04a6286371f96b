#include "alignv/assertion.hpp"

namespace alignv {

const char* arityName(Arity a) {
  switch (a) {
    case Arity::Neutral: return "neutral";
    case Arity::Unary: return "unary";
    case Arity::Relational: return "relational";
  }
  return "?";
}

Arity arityOf(const Expr& e) {
  bool plain = false;
  bool sided = false;
  for (const auto& v : freeVars(e)) (v.side == Side::Plain ? plain : sided) = true;
  if (plain && sided) throw DomainError("formula mixes unary and relational variables: " + toFormulaString(e));
  return plain ? Arity::Unary : sided ? Arity::Relational : Arity::Neutral;
}

Formula::Formula(Expr e) : e_(std::move(e)), arity_(arityOf(e_)) {}

Formula parseFormula(std::string_view text, FormulaMode mode) { return Formula(parseFormulaText(text, mode)); }

std::string toString(const Formula& f) { return toFormulaString(f.expr()); }

namespace {

void checkCompatible(const Formula& a, const Formula& b, const char* what) {
  if (a.arity() != Arity::Neutral && b.arity() != Arity::Neutral && a.arity() != b.arity())
    throw DomainError(std::string(what) + ": cannot combine " + arityName(a.arity()) + " and " + arityName(b.arity()) +
                      " formulas");
}

}  // namespace

Formula conj(const Formula& a, const Formula& b) {
  checkCompatible(a, b, "conjunction");
  if (a.isTrue()) return b;
  if (b.isTrue()) return a;
  return Formula(mkAnd(a.expr(), b.expr()));
}

Formula conj(const std::vector<Formula>& fs) {
  Formula out;
  for (const auto& f : fs) out = conj(out, f);
  return out;
}

Formula disj(const Formula& a, const Formula& b) {
  checkCompatible(a, b, "disjunction");
  if (a.isFalse()) return b;
  if (b.isFalse()) return a;
  return Formula(mkOr(a.expr(), b.expr()));
}

Formula neg(const Formula& a) { return Formula(mkNot(a.expr())); }

Formula implies(const Formula& a, const Formula& b) {
  checkCompatible(a, b, "implication");
  return Formula(mkImplies(a.expr(), b.expr()));
}

Formula normalized(const Formula& f) { return Formula(normalize(f.expr())); }

bool sameFormula(const Formula& a, const Formula& b) { return normalize(a.expr()) == normalize(b.expr()); }

namespace {

Expr retag(const Expr& e, Side side) {
  return mapVars(e, [&](const VarRef& v) {
    if (v.side != Side::Plain) throw DomainError("expected a program expression, got " + toString(e));
    return VarRef{v.name, side};
  });
}

void requireArity(const Formula& f, Arity want, const char* what) {
  if (f.arity() != Arity::Neutral && f.arity() != want)
    throw DomainError(std::string(what) + " expects a " + arityName(want) + " formula, got a " + arityName(f.arity()) +
                      " one: " + toString(f));
}

}  // namespace

Expr toLeft(const Expr& e) { return retag(e, Side::Left); }
Expr toRight(const Expr& e) { return retag(e, Side::Right); }

Formula leftOf(const Expr& e) { return Formula(toLeft(e)); }
Formula rightOf(const Expr& e) { return Formula(toRight(e)); }

Formula agree(const Expr& e, const Expr& e2) { return Formula(mkBin(Op::Eq, toLeft(e), toRight(e2))); }

Formula bagree(const Expr& e, const Expr& e2) {
  auto truth = [](const Expr& x) { return isBoolValued(x) ? x : mkBin(Op::Ne, x, Expr::lit(0)); };
  return Formula(mkBin(Op::Eq, truth(toLeft(e)), truth(toRight(e2))));
}

bool holdsU(const Formula& p, const Store& s) {
  requireArity(p, Arity::Unary, "holdsU");
  return truthy(p.expr(), Env{&s, nullptr});
}

bool holdsR(const Formula& r, const Store& s, const Store& t) {
  requireArity(r, Arity::Relational, "holdsR");
  return truthy(r.expr(), Env{&s, &t});
}

Formula substU(const Formula& p, const std::string& x, const Expr& e) {
  requireArity(p, Arity::Unary, "substU");
  return Formula(Expr::subst(p.expr(), {{VarRef{x, Side::Plain}, e}}));
}

Formula substR(const Formula& r, const std::optional<SideAssign>& left, const std::optional<SideAssign>& right) {
  requireArity(r, Arity::Relational, "substR");
  Substitution sigma;
  if (left) sigma.emplace_back(VarRef{left->var, Side::Left}, toLeft(left->value));
  if (right) sigma.emplace_back(VarRef{right->var, Side::Right}, toRight(right->value));
  return Formula(Expr::subst(r.expr(), std::move(sigma)));
}

Formula encodePlus(const Formula& r) {
  requireArity(r, Arity::Relational, "encodePlus");
  return Formula(mapVars(r.expr(), [](const VarRef& v) {
    return VarRef{v.side == Side::Right ? v.name + "'" : v.name, Side::Plain};
  }));
}

Formula decodePlus(const Formula& p) {
  requireArity(p, Arity::Unary, "decodePlus");
  return Formula(mapVars(p.expr(), [](const VarRef& v) {
    if (!v.name.empty() && v.name.back() == '\'') return VarRef{v.name.substr(0, v.name.size() - 1), Side::Right};
    return VarRef{v.name, Side::Left};
  }));
}

Store mergePlus(const Store& s, const Store& t) {
  Store out = s;
  for (const auto& [k, v] : t.bindings()) out.set(k + "'", v);
  return out;
}

Witness splitAssignment(const SlotMap& slots, const Assignment& a) {
  Witness w;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const VarRef& v = slots.vars()[i];
    (v.side == Side::Right ? w.right : w.left).set(v.name, a[i]);
  }
  return w;
}

ImplicationResult impliesBounded(const Formula& f, const Formula& g, const Domain& dom, Exec exec) {
  checkCompatible(f, g, "implication");
  if (dom.size() == 0) throw DomainError("empty domain " + toString(dom));
  std::set<VarRef> vs = freeVars(f.expr());
  collectFreeVars(g.expr(), vs);
  SearchPlan plan(std::vector<VarRef>(vs.begin(), vs.end()), {f.expr()}, dom);
  CompiledExpr goal(normalize(g.expr()), plan.slots());
  auto bad = findViolation(plan, [&](const Value* regs) { return goal.holds(regs); }, exec);
  ImplicationResult out;
  if (bad) {
    out.holds = false;
    out.witness = splitAssignment(plan.slots(), *bad);
  }
  return out;
}

bool validBounded(const Formula& f, const Domain& dom, Exec exec) {
  return impliesBounded(Formula::truth(), f, dom, exec).holds;
}

}  // namespace alignv
