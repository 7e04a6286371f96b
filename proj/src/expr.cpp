#include "alignv/expr.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace alignv {

std::string toString(const VarRef& v) {
  return v.side == Side::Right ? v.name + "'" : v.name;
}

bool isComparison(Op op) {
  switch (op) {
    case Op::Eq: case Op::Ne: case Op::Lt: case Op::Le: case Op::Gt: case Op::Ge:
      return true;
    default:
      return false;
  }
}

const char* opSymbol(Op op) {
  switch (op) {
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Mod: return "%";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::Implies: return "->";
  }
  return "?";
}

Value applyOp(Op op, Value a, Value b) {
  using U = std::uint64_t;
  switch (op) {
    case Op::Add: return static_cast<Value>(static_cast<U>(a) + static_cast<U>(b));
    case Op::Sub: return static_cast<Value>(static_cast<U>(a) - static_cast<U>(b));
    case Op::Mul: return static_cast<Value>(static_cast<U>(a) * static_cast<U>(b));
    case Op::Mod:
      // mod 0 is 0 to keep expressions total; -1 would overflow on INT64_MIN.
      if (b == 0 || b == -1) return 0;
      return a % b;
    case Op::Eq: return a == b;
    case Op::Ne: return a != b;
    case Op::Lt: return a < b;
    case Op::Le: return a <= b;
    case Op::Gt: return a > b;
    case Op::Ge: return a >= b;
    case Op::Implies: return a == 0 || b != 0;
  }
  return 0;
}

// ---------------------------------------------------------------- StoreSet

namespace {

int compareRows(std::span<const Value> a, std::span<const Value> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

}  // namespace

StoreSet::StoreSet(std::vector<VarRef> vars, std::vector<std::vector<Value>> rows) {
  const std::size_t w = vars.size();
  std::vector<std::size_t> perm(w);
  for (std::size_t i = 0; i < w; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
  vars_.reserve(w);
  for (std::size_t i : perm) vars_.push_back(vars[i]);
  for (std::size_t i = 1; i < w; ++i)
    if (vars_[i] == vars_[i - 1]) throw DomainError("duplicate variable in extensional set: " + toString(vars_[i]));

  std::vector<std::vector<Value>> sorted;
  sorted.reserve(rows.size());
  for (auto& r : rows) {
    if (r.size() != w) throw DomainError("row width does not match extensional set variables");
    std::vector<Value> p(w);
    for (std::size_t i = 0; i < w; ++i) p[i] = r[perm[i]];
    sorted.push_back(std::move(p));
  }
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  rows_ = sorted.size();
  cells_.reserve(rows_ * w);
  for (auto& r : sorted) cells_.insert(cells_.end(), r.begin(), r.end());

  std::size_t h = 0x5e7;
  for (const auto& v : vars_) h = hashCombine(h, std::hash<VarRef>{}(v));
  h = hashCombine(h, rows_);
  for (Value c : cells_) h = hashCombine(h, std::hash<Value>{}(c));
  hash_ = h;
}

bool StoreSet::contains(std::span<const Value> tuple) const {
  if (vars_.empty()) return rows_ > 0;
  std::size_t lo = 0, hi = rows_;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    int c = compareRows(row(mid), tuple);
    if (c == 0) return true;
    if (c < 0) lo = mid + 1;
    else hi = mid;
  }
  return false;
}

// -------------------------------------------------------------------- Expr

struct Expr::Node {
  Kind kind = Kind::Lit;
  Op op = Op::Add;
  Value value = 0;
  VarRef var;
  std::vector<Expr> args;
  std::shared_ptr<const StoreSet> set;
  std::vector<Binding> bindings;
  std::size_t hash = 0;
};

Expr Expr::make(Node n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x9e37 + 17;
  switch (n.kind) {
    case Kind::Lit:
      h = hashCombine(h, std::hash<Value>{}(n.value));
      break;
    case Kind::Var:
      h = hashCombine(h, std::hash<VarRef>{}(n.var));
      break;
    case Kind::Binary:
      h = hashCombine(h, static_cast<std::size_t>(n.op));
      break;
    case Kind::Set:
      h = hashCombine(h, n.set->hash());
      break;
    default:
      break;
  }
  for (const auto& a : n.args) h = hashCombine(h, a.hash());
  for (const auto& [v, r] : n.bindings) {
    h = hashCombine(h, std::hash<VarRef>{}(v));
    h = hashCombine(h, r.hash());
  }
  n.hash = h;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = make(Node{}).node_;
  node_ = zero;
}

Expr Expr::lit(Value v) {
  Node n;
  n.kind = Kind::Lit;
  n.value = v;
  return make(std::move(n));
}

Expr Expr::var(VarRef v) {
  Node n;
  n.kind = Kind::Var;
  n.var = std::move(v);
  return make(std::move(n));
}

Expr Expr::binary(Op op, Expr l, Expr r) {
  Node n;
  n.kind = Kind::Binary;
  n.op = op;
  n.args = {std::move(l), std::move(r)};
  return make(std::move(n));
}

Expr Expr::negate(Expr e) {
  Node n;
  n.kind = Kind::Not;
  n.args = {std::move(e)};
  return make(std::move(n));
}

Expr Expr::conj(std::vector<Expr> args) {
  Node n;
  n.kind = Kind::And;
  n.args = std::move(args);
  return make(std::move(n));
}

Expr Expr::disj(std::vector<Expr> args) {
  Node n;
  n.kind = Kind::Or;
  n.args = std::move(args);
  return make(std::move(n));
}

Expr Expr::set(std::shared_ptr<const StoreSet> s) {
  Node n;
  n.kind = Kind::Set;
  n.set = std::move(s);
  return make(std::move(n));
}

namespace {

const Expr* lookupBinding(const Substitution& sigma, const VarRef& v) {
  for (const auto& [k, r] : sigma)
    if (k == v) return &r;
  return nullptr;
}

}  // namespace

Expr Expr::subst(const Expr& body, std::vector<Binding> sigma) {
  if (sigma.empty()) return body;
  if (body.kind() == Kind::Subst) {
    Substitution composed;
    for (const auto& [v, r] : body.bindings()) composed.emplace_back(v, substitute(r, sigma));
    for (auto& b : sigma)
      if (!lookupBinding(body.bindings(), b.first)) composed.push_back(std::move(b));
    return subst(body.args()[0], std::move(composed));
  }
  if (body.kind() != Kind::Set) return substitute(body, sigma);

  const auto& vars = body.set().vars();
  Substitution kept;
  for (auto& b : sigma) {
    if (!std::binary_search(vars.begin(), vars.end(), b.first)) continue;
    if (b.second.kind() == Kind::Var && b.second.var() == b.first) continue;
    kept.push_back(std::move(b));
  }
  if (kept.empty()) return body;
  std::sort(kept.begin(), kept.end(), [](const Binding& a, const Binding& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < kept.size(); ++i)
    if (kept[i].first == kept[i - 1].first)
      throw DomainError("variable substituted twice: " + toString(kept[i].first));
  Node n;
  n.kind = Kind::Subst;
  n.args = {body};
  n.bindings = std::move(kept);
  return make(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Value Expr::value() const { return node_->value; }
const VarRef& Expr::var() const { return node_->var; }
Op Expr::op() const { return node_->op; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
const StoreSet& Expr::set() const {
  return node_->kind == Kind::Subst ? node_->args[0].set() : *node_->set;
}
const std::shared_ptr<const StoreSet>& Expr::setPtr() const {
  return node_->kind == Kind::Subst ? node_->args[0].setPtr() : node_->set;
}
const std::vector<Expr::Binding>& Expr::bindings() const { return node_->bindings; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

std::strong_ordering compare(const Expr& a, const Expr& b) {
  if (a.identity() == b.identity()) return std::strong_ordering::equal;
  if (auto c = a.hash() <=> b.hash(); c != 0) return c;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Expr::Kind::Lit:
      return a.value() <=> b.value();
    case Expr::Kind::Var:
      return a.var() <=> b.var();
    case Expr::Kind::Binary:
      if (auto c = a.op() <=> b.op(); c != 0) return c;
      break;
    case Expr::Kind::Set: {
      const StoreSet& x = a.set();
      const StoreSet& y = b.set();
      if (&x == &y) return std::strong_ordering::equal;
      if (auto c = x.vars() <=> y.vars(); c != 0) return c;
      if (auto c = x.size() <=> y.size(); c != 0) return c;
      for (std::size_t i = 0; i < x.size(); ++i) {
        int r = compareRows(x.row(i), y.row(i));
        if (r != 0) return r < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      return std::strong_ordering::equal;
    }
    default:
      break;
  }
  if (auto c = a.args().size() <=> b.args().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (auto c = compare(a.args()[i], b.args()[i]); c != 0) return c;
  const auto& ba = a.bindings();
  const auto& bb = b.bindings();
  if (auto c = ba.size() <=> bb.size(); c != 0) return c;
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (auto c = ba[i].first <=> bb[i].first; c != 0) return c;
    if (auto c = compare(ba[i].second, bb[i].second); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Expr mkAnd(Expr a, Expr b) { return Expr::conj({std::move(a), std::move(b)}); }
Expr mkOr(Expr a, Expr b) { return Expr::disj({std::move(a), std::move(b)}); }
Expr mkNot(Expr a) { return Expr::negate(std::move(a)); }
Expr mkImplies(Expr a, Expr b) { return Expr::binary(Op::Implies, std::move(a), std::move(b)); }
Expr mkBin(Op op, Expr a, Expr b) { return Expr::binary(op, std::move(a), std::move(b)); }

// ------------------------------------------------------------ substitution

namespace {

template <class F>
Expr rebuild(const Expr& e, F&& child) {
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(child(a));
    if (args.back().identity() != a.identity()) changed = true;
  }
  if (!changed) return e;
  switch (e.kind()) {
    case Expr::Kind::Binary: return Expr::binary(e.op(), args[0], args[1]);
    case Expr::Kind::Not: return Expr::negate(args[0]);
    case Expr::Kind::And: return Expr::conj(std::move(args));
    case Expr::Kind::Or: return Expr::disj(std::move(args));
    default: return e;
  }
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& sigma) {
  if (sigma.empty()) return e;
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var:
      if (const Expr* r = lookupBinding(sigma, e.var())) return *r;
      return e;
    case Expr::Kind::Set:
    case Expr::Kind::Subst:
      return Expr::subst(e, sigma);
    default:
      return rebuild(e, [&](const Expr& a) { return substitute(a, sigma); });
  }
}

Expr mapVars(const Expr& e, const std::function<VarRef(const VarRef&)>& f) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e;
    case Expr::Kind::Var:
      return Expr::var(f(e.var()));
    case Expr::Kind::Set: {
      const StoreSet& s = e.set();
      std::vector<VarRef> vars;
      for (const auto& v : s.vars()) vars.push_back(f(v));
      std::vector<std::vector<Value>> rows;
      rows.reserve(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) rows.emplace_back(s.row(i).begin(), s.row(i).end());
      return Expr::set(std::make_shared<const StoreSet>(std::move(vars), std::move(rows)));
    }
    case Expr::Kind::Subst: {
      Substitution sigma;
      for (const auto& [v, r] : e.bindings()) sigma.emplace_back(f(v), mapVars(r, f));
      return Expr::subst(mapVars(e.args()[0], f), std::move(sigma));
    }
    default:
      return rebuild(e, [&](const Expr& a) { return mapVars(a, f); });
  }
}

void collectFreeVars(const Expr& e, std::set<VarRef>& out) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return;
    case Expr::Kind::Var:
      out.insert(e.var());
      return;
    case Expr::Kind::Set:
      out.insert(e.set().vars().begin(), e.set().vars().end());
      return;
    case Expr::Kind::Subst:
      for (const auto& v : e.set().vars())
        if (!lookupBinding(e.bindings(), v)) out.insert(v);
      for (const auto& b : e.bindings()) collectFreeVars(b.second, out);
      return;
    default:
      for (const auto& a : e.args()) collectFreeVars(a, out);
  }
}

std::set<VarRef> freeVars(const Expr& e) {
  std::set<VarRef> out;
  collectFreeVars(e, out);
  return out;
}

bool isBoolValued(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e.value() == 0 || e.value() == 1;
    case Expr::Kind::Var:
      return false;
    case Expr::Kind::Binary:
      return isComparison(e.op()) || e.op() == Op::Implies;
    default:
      return true;
  }
}

// ----------------------------------------------------------- normalization

namespace {

Expr normBool(const Expr& e);

bool lessExpr(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

// Negation of an already normalized formula, truth-preserving.
Expr negBool(const Expr& n) {
  switch (n.kind()) {
    case Expr::Kind::Lit:
      return Expr::truth(n.value() == 0);
    case Expr::Kind::Not:
      return n.args()[0];
    case Expr::Kind::Binary:
      switch (n.op()) {
        case Op::Eq: return Expr::binary(Op::Ne, n.lhs(), n.rhs());
        case Op::Ne: return Expr::binary(Op::Eq, n.lhs(), n.rhs());
        case Op::Lt: return Expr::binary(Op::Le, n.rhs(), n.lhs());
        case Op::Le: return Expr::binary(Op::Lt, n.rhs(), n.lhs());
        default: break;
      }
      break;
    default:
      break;
  }
  return Expr::negate(n);
}

Expr normJunction(const Expr& e) {
  const bool isAnd = e.kind() == Expr::Kind::And;
  const Value unit = isAnd ? 1 : 0;
  std::vector<Expr> out;
  for (const auto& a : e.args()) {
    Expr n = normBool(a);
    if (n.kind() == e.kind()) {
      out.insert(out.end(), n.args().begin(), n.args().end());
    } else if (n.kind() == Expr::Kind::Lit) {
      if (n.value() != unit) return Expr::lit(1 - unit);
    } else {
      out.push_back(std::move(n));
    }
  }
  std::sort(out.begin(), out.end(), lessExpr);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& x : out) {
    Expr neg = negBool(x);
    if (std::binary_search(out.begin(), out.end(), neg, lessExpr)) return Expr::lit(1 - unit);
  }
  if (out.empty()) return Expr::lit(unit);
  if (out.size() == 1) {
    if (isBoolValued(out[0])) return out[0];
    return Expr::binary(Op::Ne, out[0], Expr::lit(0));
  }
  return isAnd ? Expr::conj(std::move(out)) : Expr::disj(std::move(out));
}

Expr normArith(Op op, Expr a, Expr b) {
  if (a.kind() == Expr::Kind::Lit && b.kind() == Expr::Kind::Lit) return Expr::lit(applyOp(op, a.value(), b.value()));
  switch (op) {
    case Op::Add:
      if (a.isLit(0)) return b;
      if (b.isLit(0)) return a;
      break;
    case Op::Sub:
      if (b.isLit(0)) return a;
      if (a == b) return Expr::lit(0);
      break;
    case Op::Mul:
      if (a.isLit(1)) return b;
      if (b.isLit(1)) return a;
      if (a.isLit(0) || b.isLit(0)) return Expr::lit(0);
      break;
    case Op::Mod:
      if (b.isLit(0) || b.isLit(1) || b.isLit(-1)) return Expr::lit(0);
      break;
    default:
      break;
  }
  return Expr::binary(op, std::move(a), std::move(b));
}

Expr normCompare(Op op, Expr a, Expr b) {
  if (op == Op::Gt) return normCompare(Op::Lt, std::move(b), std::move(a));
  if (op == Op::Ge) return normCompare(Op::Le, std::move(b), std::move(a));
  if (a.kind() == Expr::Kind::Lit && b.kind() == Expr::Kind::Lit) return Expr::lit(applyOp(op, a.value(), b.value()));
  if (a == b) return Expr::truth(op == Op::Eq || op == Op::Le);
  if ((op == Op::Eq || op == Op::Ne) && lessExpr(b, a)) std::swap(a, b);
  return Expr::binary(op, std::move(a), std::move(b));
}

Expr normSubst(const Expr& e) {
  Substitution sigma;
  bool allLit = true;
  for (const auto& [v, r] : e.bindings()) {
    sigma.emplace_back(v, normalizeValue(r));
    if (sigma.back().second.kind() != Expr::Kind::Lit) allLit = false;
  }
  const StoreSet& s = e.set();
  if (s.size() == 0) return Expr::lit(0);
  Expr out = Expr::subst(e.args()[0], std::move(sigma));
  if (out.kind() != Expr::Kind::Subst) return normalizeValue(out);
  if (allLit && out.bindings().size() == s.width()) {
    std::vector<Value> tuple;
    for (const auto& b : out.bindings()) tuple.push_back(b.second.value());
    return Expr::truth(s.contains(tuple));
  }
  return out;
}

Expr normBool(const Expr& e) {
  Expr n = normalizeValue(e);
  if (n.kind() == Expr::Kind::Lit) return Expr::truth(n.value() != 0);
  if (n.kind() == Expr::Kind::Binary && (n.op() == Op::Eq || n.op() == Op::Ne)) {
    const Expr* other = nullptr;
    if (n.rhs().isLit(0)) other = &n.lhs();
    else if (n.lhs().isLit(0)) other = &n.rhs();
    if (other && isBoolValued(*other)) return n.op() == Op::Ne ? *other : negBool(*other);
  }
  return n;
}

}  // namespace

Expr normalizeValue(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Binary: {
      if (e.op() == Op::Implies) return normBool(mkOr(mkNot(e.lhs()), e.rhs()));
      Expr a = normalizeValue(e.lhs());
      Expr b = normalizeValue(e.rhs());
      if (isComparison(e.op())) return normCompare(e.op(), std::move(a), std::move(b));
      return normArith(e.op(), std::move(a), std::move(b));
    }
    case Expr::Kind::Not: {
      Expr r = negBool(normBool(e.args()[0]));
      if (isBoolValued(r)) return r;
      return normCompare(Op::Ne, r, Expr::lit(0));
    }
    case Expr::Kind::And:
    case Expr::Kind::Or:
      return normJunction(e);
    case Expr::Kind::Set:
      if (e.set().width() == 0 || e.set().size() == 0) return Expr::truth(e.set().size() > 0);
      return e;
    case Expr::Kind::Subst:
      return normSubst(e);
  }
  return e;
}

Expr normalize(const Expr& e) { return normBool(e); }

std::vector<Expr> conjuncts(const Expr& e) {
  if (e.kind() == Expr::Kind::And) return e.args();
  if (e.isLit(1)) return {};
  return {e};
}

// -------------------------------------------------------------- evaluation

namespace {

Value lookup(const VarRef& v, const Env& env) {
  const Store* s = v.side == Side::Right ? env.right : env.left;
  if (!s) throw DomainError("no store available for variable " + toString(v));
  return s->get(v.name);
}

}  // namespace

Value evaluate(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case Expr::Kind::Lit:
      return e.value();
    case Expr::Kind::Var:
      return lookup(e.var(), env);
    case Expr::Kind::Binary:
      if (e.op() == Op::Implies) return evaluate(e.lhs(), env) == 0 || evaluate(e.rhs(), env) != 0;
      return applyOp(e.op(), evaluate(e.lhs(), env), evaluate(e.rhs(), env));
    case Expr::Kind::Not:
      return evaluate(e.args()[0], env) == 0;
    case Expr::Kind::And:
      for (const auto& a : e.args())
        if (evaluate(a, env) == 0) return 0;
      return 1;
    case Expr::Kind::Or:
      for (const auto& a : e.args())
        if (evaluate(a, env) != 0) return 1;
      return 0;
    case Expr::Kind::Set:
    case Expr::Kind::Subst: {
      const StoreSet& s = e.set();
      std::vector<Value> tuple(s.width());
      for (std::size_t i = 0; i < s.width(); ++i) {
        const VarRef& v = s.vars()[i];
        const Expr* r = e.kind() == Expr::Kind::Subst ? lookupBinding(e.bindings(), v) : nullptr;
        tuple[i] = r ? evaluate(*r, env) : lookup(v, env);
      }
      return s.contains(tuple);
    }
  }
  return 0;
}

// ---------------------------------------------------------------- printing

namespace {

int precOf(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Lit: return e.value() < 0 ? 8 : 10;
    case Expr::Kind::Var: return 10;
    case Expr::Kind::Set: return 10;
    case Expr::Kind::Subst: return 9;
    case Expr::Kind::Not: return 4;
    case Expr::Kind::And: return 3;
    case Expr::Kind::Or: return 2;
    case Expr::Kind::Binary:
      switch (e.op()) {
        case Op::Implies: return 1;
        case Op::Add: case Op::Sub: return 6;
        case Op::Mul: case Op::Mod: return 7;
        default: return 5;
      }
  }
  return 10;
}

void print(std::ostream& os, const Expr& e, int minPrec, bool boolCtx) {
  const bool paren = precOf(e) < minPrec;
  if (paren) os << '(';
  switch (e.kind()) {
    case Expr::Kind::Lit:
      if (boolCtx && (e.value() == 0 || e.value() == 1)) os << (e.value() ? "true" : "false");
      else os << e.value();
      break;
    case Expr::Kind::Var:
      os << toString(e.var());
      break;
    case Expr::Kind::Binary:
      if (e.op() == Op::Implies) {
        print(os, e.lhs(), 2, true);
        os << " -> ";
        print(os, e.rhs(), 1, true);
      } else if (isComparison(e.op())) {
        print(os, e.lhs(), 6, false);
        os << ' ' << opSymbol(e.op()) << ' ';
        print(os, e.rhs(), 6, false);
      } else {
        int p = precOf(e);
        print(os, e.lhs(), p, false);
        os << ' ' << opSymbol(e.op()) << ' ';
        print(os, e.rhs(), p + 1, false);
      }
      break;
    case Expr::Kind::Not:
      os << '!';
      print(os, e.args()[0], 6, true);
      break;
    case Expr::Kind::And:
    case Expr::Kind::Or: {
      const bool isAnd = e.kind() == Expr::Kind::And;
      if (e.args().empty()) {
        os << (isAnd ? "true" : "false");
        break;
      }
      for (std::size_t i = 0; i < e.args().size(); ++i) {
        if (i) os << (isAnd ? " && " : " || ");
        print(os, e.args()[i], isAnd ? 4 : 3, true);
      }
      break;
    }
    case Expr::Kind::Set:
    case Expr::Kind::Subst: {
      const StoreSet& s = e.set();
      os << '{';
      for (std::size_t i = 0; i < s.width(); ++i) os << (i ? ", " : "") << toString(s.vars()[i]);
      os << " :";
      for (std::size_t r = 0; r < s.size(); ++r) {
        os << (r ? ", (" : " (");
        auto row = s.row(r);
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? ", " : "") << row[i];
        os << ')';
      }
      os << '}';
      if (e.kind() == Expr::Kind::Subst) {
        os << '[';
        for (std::size_t i = 0; i < e.bindings().size(); ++i) {
          os << (i ? ", " : "") << toString(e.bindings()[i].first) << " := ";
          print(os, e.bindings()[i].second, 0, false);
        }
        os << ']';
      }
      break;
    }
  }
  if (paren) os << ')';
}

}  // namespace

std::string toString(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0, false);
  return os.str();
}

std::string toFormulaString(const Expr& e) {
  std::ostringstream os;
  print(os, e, 0, true);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print(os, e, 0, false);
  return os;
}

}  // namespace alignv
