#include "alignv/product.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace alignv {

const char* kindName(ProductKind k) {
  switch (k) {
    case ProductKind::OnlyLockstep: return "olck";
    case ProductKind::LeftOnly: return "lo";
    case ProductKind::RightOnly: return "ro";
    case ProductKind::Interleaved: return "ilv";
    case ProductKind::EagerLockstep: return "elck";
    case ProductKind::Sequential: return "seq";
    case ProductKind::CtrlConditioned: return "ctrl";
    case ProductKind::LockstepControl: return "lckctl";
    case ProductKind::Dovetail: return "dov";
    case ProductKind::SameExcept: return "sameexcept";
    case ProductKind::CaLoop: return "caloop";
  }
  return "?";
}

namespace {

std::vector<Label> parseLabels(const std::string& text, std::size_t want, const std::string& whole) {
  std::vector<Label> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string piece = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      int v = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      out.push_back(v);
    } catch (const std::exception&) {
      throw DomainError("product kind '" + whole + "': expected a label, got '" + piece + "'");
    }
    pos = comma + 1;
  }
  if (out.size() != want)
    throw DomainError("product kind '" + whole + "': expected " + std::to_string(want) + " label(s)");
  return out;
}

}  // namespace

ProductSpec parseProductKind(const std::string& text) {
  ProductSpec s;
  const std::size_t colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  static const std::map<std::string, ProductKind> simple = {
      {"seq", ProductKind::Sequential},     {"elck", ProductKind::EagerLockstep},
      {"olck", ProductKind::OnlyLockstep},  {"lckctl", ProductKind::LockstepControl},
      {"ilv", ProductKind::Interleaved},    {"lo", ProductKind::LeftOnly},
      {"ro", ProductKind::RightOnly},       {"dov", ProductKind::Dovetail},
  };
  if (auto it = simple.find(head); it != simple.end()) {
    if (colon != std::string::npos) throw DomainError("product kind '" + head + "' takes no arguments");
    s.kind = it->second;
    return s;
  }
  if (head == "sameexcept") {
    auto ls = parseLabels(args, 2, text);
    s.kind = ProductKind::SameExcept;
    s.beg = ls[0];
    s.end = ls[1];
    return s;
  }
  if (head == "caloop") {
    auto ls = parseLabels(args, 1, text);
    s.kind = ProductKind::CaLoop;
    s.beg = ls[0];
    return s;
  }
  throw DomainError("unknown product kind '" + text + "'");
}

std::set<VarRef> sided(const std::set<VarRef>& vs, Side side) {
  std::set<VarRef> out;
  for (const auto& v : vs) out.insert(VarRef{v.name, side});
  return out;
}

namespace {

// One component transition seen through a side of the product.
struct Move {
  Label from;
  Label to;
  Expr guard;
  std::vector<Update> updates;
  std::string kind;
};

Move lift(const Transition& t, Side side) {
  Move m{t.from.left, t.to.left, side == Side::Left ? toLeft(t.guard) : toRight(t.guard), {}, t.kind};
  for (const auto& u : t.updates)
    m.updates.push_back({VarRef{u.var.name, side}, side == Side::Left ? toLeft(u.value) : toRight(u.value)});
  return m;
}

using Moves = std::map<Label, std::vector<Move>>;

Moves movesOf(const Automaton& a, Side side) {
  if (a.paired()) throw DomainError("product components must be unary automata");
  Moves out;
  for (const auto& t : a.transitions()) out[t.from.left].push_back(lift(t, side));
  return out;
}

const std::vector<Move>& at(const Moves& ms, Label n) {
  static const std::vector<Move> none;
  auto it = ms.find(n);
  return it == ms.end() ? none : it->second;
}

Expr andAll(std::initializer_list<Expr> es) {
  std::vector<Expr> parts;
  for (const auto& e : es)
    if (!e.isLit(1)) parts.push_back(e);
  if (parts.empty()) return Expr::truth(true);
  return parts.size() == 1 ? parts.front() : Expr::conj(std::move(parts));
}

class Builder {
 public:
  void add(Point from, Point to, const Move* l, const Move* r, const Expr& extra = Expr::truth(true),
           const std::string& prefix = "") {
    Transition t;
    t.from = from;
    t.to = to;
    t.guard = andAll({extra, l ? l->guard : Expr::truth(true), r ? r->guard : Expr::truth(true)});
    if (l) t.updates.insert(t.updates.end(), l->updates.begin(), l->updates.end());
    if (r) t.updates.insert(t.updates.end(), r->updates.begin(), r->updates.end());
    if (l && r)
      t.kind = l->kind + "|" + r->kind;
    else if (l)
      t.kind = "Left:" + l->kind;
    else
      t.kind = "Right:" + r->kind;
    if (!prefix.empty()) t.kind = prefix + " " + t.kind;
    for (const auto& o : ts_) {
      if (o.from == t.from && o.to == t.to && o.guard == t.guard && o.updates.size() == t.updates.size() &&
          std::equal(o.updates.begin(), o.updates.end(), t.updates.begin(),
                     [](const Update& x, const Update& y) { return x.var == y.var && x.value == y.value; }))
        return;
    }
    ts_.push_back(std::move(t));
  }
  std::vector<Transition> take() { return std::move(ts_); }

 private:
  std::vector<Transition> ts_;
};

std::vector<Label> labelsOf(const Automaton& a) {
  std::vector<Label> out;
  for (const auto& p : a.controls()) out.push_back(p.left);
  return out;
}

std::set<VarRef> productFootprint(const Automaton& a, const Automaton& b) {
  auto fp = sided(a.footprint(), Side::Left);
  auto r = sided(b.footprint(), Side::Right);
  fp.insert(r.begin(), r.end());
  return fp;
}

}  // namespace

Automaton buildProduct(const Automaton& a, const Automaton& b, const ProductSpec& spec) {
  const Moves lm = movesOf(a, Side::Left);
  const Moves rm = movesOf(b, Side::Right);
  const Label finA = a.fin().left, finB = b.fin().left;
  const Label initA = a.init().left, initB = b.init().left;
  const auto la = labelsOf(a), lb = labelsOf(b);
  Builder bld;
  std::vector<Point> ctrl;
  auto P = [](Label x, Label y, Tag t = Tag::None) { return Point::pair(x, y, t); };

  if (spec.kind == ProductKind::Dovetail) {
    auto land = [&](Label x, Label y, Tag t) { return P(x, y, x == finA && y == finB ? Tag::Bit0 : t); };
    for (Label n : la)
      for (Label m : lb)
        for (Tag bit : {Tag::Bit0, Tag::Bit1}) {
          if (n == finA && m == finB && bit == Tag::Bit1) continue;
          ctrl.push_back(P(n, m, bit));
          const Point from = P(n, m, bit);
          // Once one side has terminated the bit is frozen.
          for (const auto& mv : at(lm, n)) {
            if (m == finB) bld.add(from, land(mv.to, m, bit), &mv, nullptr);
            else if (bit == Tag::Bit0) bld.add(from, land(mv.to, m, Tag::Bit1), &mv, nullptr);
          }
          for (const auto& mv : at(rm, m)) {
            if (n == finA) bld.add(from, land(n, mv.to, bit), nullptr, &mv);
            else if (bit == Tag::Bit1) bld.add(from, land(n, mv.to, Tag::Bit0), nullptr, &mv);
          }
        }
    return Automaton(true, P(initA, initB, Tag::Bit0), P(finA, finB, Tag::Bit0), std::move(ctrl), bld.take(),
                     productFootprint(a, b));
  }

  for (Label n : la) {
    for (Label m : lb) {
      ctrl.push_back(P(n, m));
      const Point from = P(n, m);
      auto lefts = [&] {
        for (const auto& mv : at(lm, n)) bld.add(from, P(mv.to, m), &mv, nullptr);
      };
      auto rights = [&] {
        for (const auto& mv : at(rm, m)) bld.add(from, P(n, mv.to), nullptr, &mv);
      };
      auto joints = [&] {
        for (const auto& x : at(lm, n))
          for (const auto& y : at(rm, m)) bld.add(from, P(x.to, y.to), &x, &y);
      };
      switch (spec.kind) {
        case ProductKind::OnlyLockstep: joints(); break;
        case ProductKind::LeftOnly: lefts(); break;
        case ProductKind::RightOnly: rights(); break;
        case ProductKind::Interleaved:
          lefts();
          rights();
          break;
        case ProductKind::EagerLockstep:
          joints();
          if (n == finA) rights();
          if (m == finB) lefts();
          break;
        case ProductKind::Sequential:
          if (m == initB) lefts();
          if (n == finA) rights();
          break;
        case ProductKind::CtrlConditioned:
          if (spec.left.count({n, m})) lefts();
          if (spec.right.count({n, m})) rights();
          if (spec.joint.count({n, m})) joints();
          break;
        case ProductKind::LockstepControl:
          if (n == m) joints();
          break;
        default:
          throw DomainError(std::string("product kind ") + kindName(spec.kind) + " needs the programs");
      }
    }
  }
  return Automaton(true, P(initA, initB), P(finA, finB), std::move(ctrl), bld.take(), productFootprint(a, b));
}

namespace {

const CommandPtr* innermost(const CommandPtr& c, Label beg, Label end, const Command& whole, Label fin) {
  if (c->first())
    if (auto r = innermost(c->first(), beg, end, whole, fin)) return r;
  if (c->second())
    if (auto r = innermost(c->second(), beg, end, whole, fin)) return r;
  if (lab(*c) == beg && elab(*c, whole, fin) == end) return &c;
  return nullptr;
}

bool disjointExcept(const std::vector<Label>& xs, const std::vector<Label>& ys, Label beg) {
  for (Label x : xs)
    if (x != beg && std::binary_search(ys.begin(), ys.end(), x)) return false;
  return true;
}

}  // namespace

SameExceptInfo sameExcept(const Program& p, const Program& q, Label beg, Label end) {
  SameExceptInfo info;
  auto fail = [&](std::string clause, std::string reason) {
    info.ok = false;
    info.clause = std::move(clause);
    info.reason = std::move(reason);
    return info;
  };
  if (p.fin != q.fin) return fail("fin", "programs have different fin labels");
  const CommandPtr* b = innermost(p.body, beg, end, *p.body, p.fin);
  const CommandPtr* b2 = innermost(q.body, beg, end, *q.body, q.fin);
  if (!b || !b2)
    return fail("c = ĉ[b]", "no subprogram of the " + std::string(!b ? "left" : "right") + " program starts at " +
                                 std::to_string(beg) + " and exits to " + std::to_string(end));
  info.b = *b;
  info.b2 = *b2;
  if (lab(**b) != beg || lab(**b2) != beg) return fail("beg = lab(b) = lab(b')", "entry labels differ");
  if (!disjointExcept(labs(**b), labs(**b2), beg))
    return fail("labs(b) ∩ labs(b') = {beg}", "the replaced subprograms share labels other than " + std::to_string(beg));
  if (elab(**b, *p.body, p.fin) != end || elab(**b2, *q.body, q.fin) != end)
    return fail("end = elab(b) = elab(b')", "exit labels differ");
  info.context = replaceSubterm(p.body, **b, Command::skip(beg));
  info.context2 = replaceSubterm(q.body, **b2, Command::skip(beg));
  if (!sameCtl(*info.context, *info.context2))
    return fail("sameCtl(ĉ[skip], ĉ'[skip])", "contexts differ in control structure");
  if (!choiceFree(*info.context) || !choiceFree(*info.context2)) return fail("choice-free contexts", "a context contains a choice");
  info.ok = true;
  return info;
}

namespace {

Automaton sameExceptProduct(const Program& p, const Program& q, const ProductSpec& spec) {
  auto info = sameExcept(p, q, spec.beg, spec.end);
  if (!info.ok) throw DomainError("sameExcept fails (" + info.clause + "): " + info.reason);
  const Automaton a = autOf(p), b = autOf(q);
  const Moves lm = movesOf(a, Side::Left), rm = movesOf(b, Side::Right);
  const auto la = labelsOf(a), lb = labelsOf(b);
  const auto labsB = labs(*info.b), labsB2 = labs(*info.b2);
  auto inB = [&](Label n) { return std::binary_search(labsB.begin(), labsB.end(), n); };
  auto inB2 = [&](Label n) { return std::binary_search(labsB2.begin(), labsB2.end(), n); };
  const Label beg = spec.beg, end = spec.end, fin = p.fin;
  auto P = [](Label x, Label y, Tag t) { return Point::pair(x, y, t); };
  Builder bld;
  std::vector<Point> ctrl;
  for (Label n : la)
    for (Label m : lb)
      for (Tag t : {Tag::Lck, Tag::Lo, Tag::Ro}) ctrl.push_back(P(n, m, t));
  for (Label n : la) {
    // (i), (ii): lockstep-control outside the replaced subprograms.
    if (!inB(n) && !inB2(n) && std::binary_search(lb.begin(), lb.end(), n)) {
      for (const auto& x : at(lm, n))
        for (const auto& y : at(rm, n)) {
          if (x.to != y.to) continue;
          if (x.to != beg)
            bld.add(P(n, n, Tag::Lck), P(x.to, x.to, Tag::Lck), &x, &y, Expr::truth(true), "(i)");
          else
            bld.add(P(n, n, Tag::Lck), P(beg, beg, Tag::Lo), &x, &y, Expr::truth(true), "(ii)");
        }
    }
    // (iii), (iv): left-only through b.
    if (inB(n))
      for (const auto& x : at(lm, n)) {
        if (x.to != end)
          bld.add(P(n, beg, Tag::Lo), P(x.to, beg, Tag::Lo), &x, nullptr, Expr::truth(true), "(iii)");
        else
          bld.add(P(n, beg, Tag::Lo), P(end, beg, Tag::Ro), &x, nullptr, Expr::truth(true), "(iv)");
      }
  }
  // (v), (vi): right-only through b'.
  for (Label m : lb) {
    if (!inB2(m)) continue;
    for (const auto& y : at(rm, m)) {
      if (y.to != end)
        bld.add(P(end, m, Tag::Ro), P(end, y.to, Tag::Ro), nullptr, &y, Expr::truth(true), "(v)");
      else
        bld.add(P(end, m, Tag::Ro), P(end, end, Tag::Lck), nullptr, &y, Expr::truth(true), "(vi)");
    }
  }
  const Label init = lab(*p.body);
  const Point initP = init == beg ? P(beg, beg, Tag::Lo) : P(init, init, Tag::Lck);
  return Automaton(true, initP, P(fin, fin, Tag::Lck), std::move(ctrl), bld.take(), productFootprint(a, b));
}

Automaton caLoopProduct(const Program& p, const Program& q, const ProductSpec& spec) {
  if (p.fin != q.fin) throw DomainError("caloop: programs have different fin labels");
  if (!sameCtl(*p.body, *q.body)) throw DomainError("caloop: sameCtl(c, c') fails");
  if (!choiceFree(*p.body) || !choiceFree(*q.body)) throw DomainError("caloop: programs must be choice-free");
  if (!hasLabel(*p.body, spec.beg)) throw DomainError("caloop: label " + std::to_string(spec.beg) + " not in program");
  CommandPtr w = sub(spec.beg, p.body);
  if (w->kind() != Command::Kind::While)
    throw DomainError("caloop: sub(" + std::to_string(spec.beg) + ", c) is not a loop");
  for (const Formula* g : {&spec.lambda, &spec.rho})
    if (g->arity() == Arity::Unary) throw DomainError("caloop: guards must be relational formulas");
  const Automaton a = autOf(p), b = autOf(q);
  const Moves lm = movesOf(a, Side::Left), rm = movesOf(b, Side::Right);
  const auto la = labelsOf(a);
  const auto bodyLabs = labs(*w->body());
  auto inBody = [&](Label n) { return std::binary_search(bodyLabs.begin(), bodyLabs.end(), n); };
  const Label beg = spec.beg;
  const Label entry = lab(*w->body());
  auto P = [](Label x, Label y, Tag t) { return Point::pair(x, y, t); };
  const Expr lam = spec.lambda.expr(), rho = spec.rho.expr();
  Builder bld;
  std::vector<Point> ctrl;
  for (Label n : la)
    for (Label m : la)
      for (Tag t : {Tag::Lck, Tag::Lo, Tag::Ro}) ctrl.push_back(P(n, m, t));
  auto find = [](const std::vector<Move>& ms, const char* kind) -> const Move* {
    for (const auto& mv : ms)
      if (mv.kind == kind) return &mv;
    return nullptr;
  };
  for (Label n : la) {
    if (n == beg) {
      const Move* enterL = find(at(lm, beg), "WhileEnter");
      const Move* enterR = find(at(rm, beg), "WhileEnter");
      const Move* exitL = find(at(lm, beg), "WhileExit");
      const Move* exitR = find(at(rm, beg), "WhileExit");
      const Point top = P(beg, beg, Tag::Lck);
      bld.add(top, P(entry, entry, Tag::Lck), enterL, enterR, andAll({mkNot(lam), mkNot(rho)}), "lck");
      bld.add(top, P(entry, beg, Tag::Lo), enterL, nullptr, lam, "lo");
      bld.add(top, P(beg, entry, Tag::Ro), nullptr, enterR, rho, "ro");
      bld.add(top, P(exitL->to, exitR->to, Tag::Lck), exitL, exitR, Expr::truth(true), "lck");
    } else {
      for (const auto& x : at(lm, n))
        for (const auto& y : at(rm, n))
          if (x.to == y.to) bld.add(P(n, n, Tag::Lck), P(x.to, x.to, Tag::Lck), &x, &y, Expr::truth(true), "lck");
    }
    if (inBody(n)) {
      for (const auto& x : at(lm, n))
        bld.add(P(n, beg, Tag::Lo), x.to == beg ? P(beg, beg, Tag::Lck) : P(x.to, beg, Tag::Lo), &x, nullptr,
                Expr::truth(true), "lo");
      for (const auto& y : at(rm, n))
        bld.add(P(beg, n, Tag::Ro), y.to == beg ? P(beg, beg, Tag::Lck) : P(beg, y.to, Tag::Ro), nullptr, &y,
                Expr::truth(true), "ro");
    }
  }
  const Label init = lab(*p.body);
  return Automaton(true, P(init, init, Tag::Lck), P(p.fin, p.fin, Tag::Lck), std::move(ctrl), bld.take(),
                   productFootprint(a, b));
}

}  // namespace

Automaton buildProduct(const Program& p, const Program& q, const ProductSpec& spec) {
  switch (spec.kind) {
    case ProductKind::SameExcept: return sameExceptProduct(p, q, spec);
    case ProductKind::CaLoop: return caLoopProduct(p, q, spec);
    case ProductKind::LockstepControl:
      if (p.fin != q.fin) throw DomainError("lckctl: programs have different fin labels");
      if (!sameCtl(*p.body, *q.body, true)) throw DomainError("lckctl: sameCtl(c, c') fails");
      break;
    default:
      break;
  }
  return buildProduct(autOf(p), autOf(q), spec);
}

AutTrace projectLeft(const AutTrace& t) {
  AutTrace out;
  for (const auto& s : t) {
    AutState u{Point::unary(s.ctrl.left), s.left, {}};
    if (out.empty() || !(out.back() == u)) out.push_back(std::move(u));
  }
  return out;
}

AutTrace projectRight(const AutTrace& t) {
  AutTrace out;
  for (const auto& s : t) {
    AutState u{Point::unary(s.ctrl.right), s.right, {}};
    if (out.empty() || !(out.back() == u)) out.push_back(std::move(u));
  }
  return out;
}

bool projectsCorrectly(const Automaton& prod, const Automaton& a, const Automaton& b, const AutState& s) {
  const AutState l{Point::unary(s.ctrl.left), s.left, {}};
  const AutState r{Point::unary(s.ctrl.right), s.right, {}};
  const auto ls = a.successors(l), rs = b.successors(r);
  for (const auto& n : prod.successors(s)) {
    const AutState nl{Point::unary(n.ctrl.left), n.left, {}};
    const AutState nr{Point::unary(n.ctrl.right), n.right, {}};
    const bool lStay = nl == l, rStay = nr == r;
    const bool lStep = std::find(ls.begin(), ls.end(), nl) != ls.end();
    const bool rStep = std::find(rs.begin(), rs.end(), nr) != rs.end();
    if (!((lStep && rStay) || (lStay && rStep) || (lStep && rStep))) return false;
  }
  return true;
}

namespace {

struct PairStarts {
  std::vector<Store> lefts;
  std::vector<Store> rights;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

// R-related initial store pairs over the live variables of both sides.
PairStarts pairStarts(const Automaton& a, const Automaton& b, const Formula& r, const std::set<VarRef>& leftLive,
                      const std::set<VarRef>& rightLive, const Domain& dom, Exec exec) {
  std::set<VarRef> vs = sided(leftLive, Side::Left);
  auto rv = sided(rightLive, Side::Right);
  vs.insert(rv.begin(), rv.end());
  collectFreeVars(r.expr(), vs);
  SearchPlan plan(std::vector<VarRef>(vs.begin(), vs.end()), {r.expr()}, dom);
  Store baseL, baseR;
  for (const auto& v : a.footprint()) baseL.set(v.name, dom.lo);
  for (const auto& v : b.footprint()) baseR.set(v.name, dom.lo);
  PairStarts out;
  std::map<Store, std::size_t> li, ri;
  for (const auto& row : collect(plan, exec)) {
    Store s = baseL, t = baseR;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const VarRef& v = plan.slots().vars()[i];
      (v.side == Side::Right ? t : s).set(v.name, row[i]);
    }
    auto [lit, lnew] = li.emplace(s, out.lefts.size());
    if (lnew) out.lefts.push_back(s);
    auto [rit, rnew] = ri.emplace(t, out.rights.size());
    if (rnew) out.rights.push_back(t);
    out.pairs.emplace_back(lit->second, rit->second);
  }
  return out;
}

Expr plainReads(const Formula& f, Side side) {
  std::vector<Expr> vs;
  for (const auto& v : freeVars(f.expr()))
    if (v.side == side) vs.push_back(Expr::var(v.name));
  return vs.empty() ? Expr::truth(true) : Expr::conj(std::move(vs));
}

bool covers(const Automaton& prod, const AutTrace& tl, const AutTrace& tr) {
  std::set<std::tuple<Point, std::size_t, std::size_t>> seen;
  std::vector<std::tuple<Point, std::size_t, std::size_t>> stack{{prod.init(), 0, 0}};
  const std::size_t li = tl.size() - 1, ri = tr.size() - 1;
  while (!stack.empty()) {
    auto [p, i, j] = stack.back();
    stack.pop_back();
    if (!seen.insert({p, i, j}).second) continue;
    if (i == li && j == ri) return true;
    const AutState cur{p, tl[i].left, tr[j].left};
    for (const auto& n : prod.successors(cur)) {
      std::size_t ni = i, nj = j;
      if (n.ctrl.left == tl[i].ctrl.left && n.left == tl[i].left) {
      } else if (i < li && n.ctrl.left == tl[i + 1].ctrl.left && n.left == tl[i + 1].left) {
        ni = i + 1;
      } else {
        continue;
      }
      if (n.ctrl.right == tr[j].ctrl.left && n.right == tr[j].left) {
      } else if (j < ri && n.ctrl.right == tr[j + 1].ctrl.left && n.right == tr[j + 1].left) {
        nj = j + 1;
      } else {
        continue;
      }
      stack.emplace_back(n.ctrl, ni, nj);
    }
  }
  return false;
}

struct Runs {
  std::vector<AutTrace> traces;
  bool failed = false;
  std::string note;
};

Runs terminatedTraces(const Automaton& a, const Store& s, std::size_t maxLen) {
  Runs out;
  try {
    for (auto& t : autTraces(a, AutState{a.init(), s, {}}, maxLen))
      if (t.back().ctrl == a.fin()) out.traces.push_back(std::move(t));
  } catch (const DomainError& e) {
    out.failed = true;
    out.note = e.what();
  }
  return out;
}

}  // namespace

AdequacyResult checkAdequacy(const Automaton& prod, const Automaton& a, const Automaton& b, const Formula& r,
                             const Domain& dom, std::size_t maxLen, Exec exec) {
  if (!prod.paired() || a.paired() || b.paired()) throw DomainError("checkAdequacy: expects a product of two unary automata");
  auto la = liveVars(a, {});
  auto lb = liveVars(b, {});
  auto starts = pairStarts(a, b, r, la[a.init()], lb[b.init()], dom, exec);
  std::vector<Runs> lr(starts.lefts.size()), rr(starts.rights.size());
  parallelFor(starts.lefts.size(), [&](std::size_t i) { lr[i] = terminatedTraces(a, starts.lefts[i], maxLen); }, exec);
  parallelFor(starts.rights.size(), [&](std::size_t i) { rr[i] = terminatedTraces(b, starts.rights[i], maxLen); }, exec);
  AdequacyResult res;
  res.pairs = starts.pairs.size();
  for (const auto& runs : {&lr, &rr})
    for (const auto& x : *runs)
      if (x.failed) {
        res.verdict = Verdict::Inconclusive;
        res.note = x.note;
        return res;
      }
  struct Miss {
    bool found = false;
    AutTrace l, r;
  };
  std::vector<Miss> miss(starts.pairs.size());
  parallelFor(
      starts.pairs.size(),
      [&](std::size_t k) {
        const auto& [i, j] = starts.pairs[k];
        for (const auto& tl : lr[i].traces)
          for (const auto& tr : rr[j].traces)
            if (!covers(prod, tl, tr)) {
              miss[k] = {true, tl, tr};
              return;
            }
      },
      exec);
  for (auto& m : miss) {
    if (m.found) {
      res.verdict = Verdict::Fails;
      res.left = std::move(m.l);
      res.right = std::move(m.r);
      res.note = "terminated trace pair not covered by the product";
      return res;
    }
  }
  res.note = std::to_string(res.pairs) + " initial store pairs, traces up to " + std::to_string(maxLen) + " steps";
  return res;
}

RelResult relSatisfiesBounded(const Automaton& a, const Automaton& b, const Formula& r, const Formula& s,
                              const Domain& dom, std::size_t maxSteps, Exec exec) {
  for (const Formula* f : {&r, &s})
    if (f->arity() == Arity::Unary) throw DomainError("relSatisfiesBounded: expected a relational formula, got " + toString(*f));
  auto la = liveVars(a, {{a.fin(), plainReads(s, Side::Left)}});
  auto lb = liveVars(b, {{b.fin(), plainReads(s, Side::Right)}});
  auto starts = pairStarts(a, b, r, la[a.init()], lb[b.init()], dom, exec);
  struct Finals {
    std::vector<Store> stores;
    bool exhausted = false;
  };
  auto finals = [](const Automaton& m, const Store& st, std::size_t budget) {
    Finals f;
    Reach reach = explore(m, AutState{m.init(), st, {}}, budget);
    f.exhausted = reach.exhausted;
    for (const auto& x : reach.states)
      if (x.ctrl == m.fin()) f.stores.push_back(x.left);
    return f;
  };
  std::vector<Finals> lf(starts.lefts.size()), rf(starts.rights.size());
  parallelFor(starts.lefts.size(), [&](std::size_t i) { lf[i] = finals(a, starts.lefts[i], maxSteps); }, exec);
  parallelFor(starts.rights.size(), [&](std::size_t i) { rf[i] = finals(b, starts.rights[i], maxSteps); }, exec);
  RelResult res;
  bool exhausted = false;
  for (const auto& [i, j] : starts.pairs) {
    exhausted = exhausted || lf[i].exhausted || rf[j].exhausted;
    for (const auto& x : lf[i].stores)
      for (const auto& y : rf[j].stores)
        if (!truthy(s.expr(), Env{&x, &y})) {
          res.verdict = Verdict::Fails;
          res.initial = Witness{starts.lefts[i], starts.rights[j]};
          res.final = Witness{x, y};
          res.note = "final stores violate the postcondition";
          return res;
        }
  }
  if (exhausted) {
    res.verdict = Verdict::Inconclusive;
    res.note = "step budget " + std::to_string(maxSteps) + " exhausted";
    return res;
  }
  res.note = std::to_string(starts.pairs.size()) + " initial store pairs";
  return res;
}

}  // namespace alignv
