#include "alignv/automaton.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace alignv {

std::string toString(const AutState& s, bool paired) {
  std::string out = "(" + toString(s.ctrl) + ", " + toString(s.left);
  if (paired) out += " | " + toString(s.right);
  return out + ")";
}

std::string toString(const AutTrace& t, bool paired) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += " -> ";
    out += toString(t[i], paired);
  }
  return out;
}

Automaton::Automaton(bool paired, Point init, Point fin, std::vector<Point> ctrl, std::vector<Transition> ts,
                     std::set<VarRef> footprint)
    : paired_(paired),
      init_(init),
      fin_(fin),
      ctrl_(std::move(ctrl)),
      ts_(std::move(ts)),
      footprint_(std::move(footprint)) {
  for (std::size_t i = 0; i < ctrl_.size(); ++i) index_.emplace(ctrl_[i], i);
  if (!hasControl(init_)) throw DomainError("automaton: init " + toString(init_) + " is not a control point");
  if (!hasControl(fin_)) throw DomainError("automaton: fin " + toString(fin_) + " is not a control point");
  for (std::size_t i = 0; i < ts_.size(); ++i) {
    const auto& t = ts_[i];
    if (!hasControl(t.from) || !hasControl(t.to))
      throw DomainError("automaton: transition " + toString(t.from) + " -> " + toString(t.to) + " leaves ctrl");
    if (t.from == fin_) throw DomainError("automaton: transition out of fin " + toString(fin_));
    if (t.from == t.to) throw DomainError("automaton: stuttering transition at " + toString(t.from));
    out_[t.from].push_back(i);
  }
}

const std::vector<std::size_t>& Automaton::outgoing(const Point& p) const {
  static const std::vector<std::size_t> none;
  auto it = out_.find(p);
  return it == out_.end() ? none : it->second;
}

bool Automaton::enabled(const Transition& t, const AutState& s) const {
  return truthy(t.guard, Env{&s.left, &s.right});
}

AutState Automaton::fire(const Transition& t, const AutState& s) const {
  AutState n{t.to, s.left, s.right};
  const Env env{&s.left, &s.right};
  for (const auto& u : t.updates) {
    Value v = evaluate(u.value, env);
    (u.var.side == Side::Right ? n.right : n.left).set(u.var.name, v);
  }
  return n;
}

std::vector<AutState> Automaton::successors(const AutState& s) const {
  std::vector<AutState> out;
  for (std::size_t i : outgoing(s.ctrl)) {
    const auto& t = ts_[i];
    if (enabled(t, s)) out.push_back(fire(t, s));
  }
  return out;
}

Automaton autOf(const Program& p) {
  if (!ok(p)) throw DomainError("autOf: program is not ok (labels must be unique, non-negative, and differ from fin)");
  const Command& c = *p.body;
  std::vector<Point> ctrl;
  std::vector<Transition> ts;
  auto pt = [](Label n) { return Point::unary(n); };
  for (Label n : labs(c)) {
    ctrl.push_back(pt(n));
    CommandPtr b = sub(n, p.body);
    const Label next = fsuc(n, c, p.fin);
    switch (b->kind()) {
      case Command::Kind::Skip:
        ts.push_back({pt(n), pt(next), Expr::truth(true), {}, "Skip"});
        break;
      case Command::Kind::Assign:
        if (n == 0) throw DomainError("autOf: label 0 on an assignment is not supported");
        ts.push_back({pt(n), pt(next), Expr::truth(true), {{VarRef{b->target()}, b->expr()}}, "Assign"});
        break;
      case Command::Kind::Choice:
        ts.push_back({pt(n), pt(lab(*b->first())), Expr::truth(true), {}, "ChoiceLeft"});
        ts.push_back({pt(n), pt(lab(*b->second())), Expr::truth(true), {}, "ChoiceRight"});
        break;
      case Command::Kind::If:
        ts.push_back({pt(n), pt(lab(*b->first())), b->expr(), {}, "IfTrue"});
        ts.push_back({pt(n), pt(lab(*b->second())), mkNot(b->expr()), {}, "IfFalse"});
        break;
      case Command::Kind::While:
        if (n == 0) throw DomainError("autOf: label 0 on a loop is not supported");
        ts.push_back({pt(n), pt(lab(*b->body())), b->expr(), {}, "WhileEnter"});
        ts.push_back({pt(n), pt(next), mkNot(b->expr()), {}, "WhileExit"});
        break;
      case Command::Kind::Seq:
        throw DomainError("autOf: sub returned a sequence");
    }
  }
  ctrl.push_back(pt(p.fin));
  std::set<VarRef> fp;
  for (const auto& x : variables(c)) fp.insert(VarRef{x});
  return Automaton(false, pt(lab(c)), pt(p.fin), std::move(ctrl), std::move(ts), std::move(fp));
}

std::vector<Point> Cfg::successors(const Point& n) const {
  std::vector<Point> out;
  for (const auto& [a, b] : edges)
    if (a == n) out.push_back(b);
  return out;
}

Cfg cfgOf(const Automaton& a, const std::optional<Domain>& dom) {
  Cfg g;
  g.nodes = a.controls();
  std::sort(g.nodes.begin(), g.nodes.end());
  std::unordered_map<Expr, bool> sat;
  for (const auto& t : a.transitions()) {
    if (a.paired() && dom && !t.guard.isLit(1)) {
      auto it = sat.find(t.guard);
      if (it == sat.end())
        it = sat.emplace(t.guard, !impliesBounded(Formula(t.guard), Formula::falsity(), *dom).holds).first;
      if (!it->second) continue;
    }
    g.edges.emplace(t.from, t.to);
  }
  return g;
}

namespace {

std::string dotId(const Point& p) {
  if (!p.paired) return std::to_string(p.left);
  return "\"" + toString(p) + "\"";
}

}  // namespace

std::string toDot(const Cfg& g, const Point& init, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (const auto& n : g.nodes) {
    os << "  " << dotId(n);
    if (n == init) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (const auto& [a, b] : g.edges) os << "  " << dotId(a) << " -> " << dotId(b) << ";\n";
  os << "}\n";
  return os.str();
}

std::string toString(const std::vector<Point>& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ", ";
    out += toString(path[i]);
  }
  return out + "]";
}

CutsetCheck validateCutset(const Cfg& g, const Point& init, const Point& fin, const std::set<Point>& k) {
  CutsetCheck out;
  for (const auto& p : k) {
    if (std::find(g.nodes.begin(), g.nodes.end(), p) == g.nodes.end()) {
      out.ok = false;
      out.reason = "cutpoint " + toString(p) + " is not a control point";
      return out;
    }
  }
  if (!k.count(init)) {
    out.ok = false;
    out.reason = "cutset must contain init " + toString(init);
    return out;
  }
  if (!k.count(fin)) {
    out.ok = false;
    out.reason = "cutset must contain fin " + toString(fin);
    return out;
  }
  // Every cycle must meet k: look for a cycle among the other points.
  std::map<Point, int> color;
  std::vector<Point> stack;
  std::function<bool(const Point&)> dfs = [&](const Point& n) {
    color[n] = 1;
    stack.push_back(n);
    for (const auto& m : g.successors(n)) {
      if (k.count(m)) continue;
      if (color[m] == 1) {
        auto it = std::find(stack.begin(), stack.end(), m);
        out.cycle.assign(it, stack.end());
        out.cycle.push_back(m);
        return true;
      }
      if (color[m] == 0 && dfs(m)) return true;
    }
    stack.pop_back();
    color[n] = 2;
    return false;
  };
  for (const auto& n : g.nodes) {
    if (k.count(n) || color[n] != 0) continue;
    if (dfs(n)) {
      out.ok = false;
      out.reason = "cycle " + toString(out.cycle) + " contains no cutpoint";
      return out;
    }
  }
  return out;
}

std::vector<std::vector<Point>> segments(const Cfg& g, const Point& init, const Point& fin, const std::set<Point>& k) {
  auto chk = validateCutset(g, init, fin, k);
  if (!chk.ok) throw DomainError("invalid cutset: " + chk.reason);
  std::vector<std::vector<Point>> out;
  std::vector<Point> path;
  std::function<void(const Point&)> walk = [&](const Point& n) {
    for (const auto& m : g.successors(n)) {
      path.push_back(m);
      if (k.count(m))
        out.push_back(path);
      else
        walk(m);
      path.pop_back();
    }
  };
  for (const auto& s : k) {
    path = {s};
    walk(s);
  }
  return out;
}

std::vector<AutState> segRel(const Automaton& a, const std::vector<Point>& path, const AutState& start) {
  if (path.empty() || start.ctrl != path.front()) return {};
  std::vector<AutState> cur{start};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    std::vector<AutState> next;
    for (const auto& s : cur)
      for (std::size_t ti : a.outgoing(path[i])) {
        const auto& t = a.transitions()[ti];
        if (t.to == path[i + 1] && a.enabled(t, s)) next.push_back(a.fire(t, s));
      }
    std::unordered_set<AutState> seen;
    cur.clear();
    for (auto& s : next)
      if (seen.insert(s).second) cur.push_back(std::move(s));
  }
  return cur;
}

Expr wlpEdge(const Automaton& a, const Point& from, const Point& to, const Expr& post) {
  std::vector<Expr> parts;
  for (std::size_t ti : a.outgoing(from)) {
    const auto& t = a.transitions()[ti];
    if (t.to != to) continue;
    Substitution sigma;
    for (const auto& u : t.updates) sigma.emplace_back(u.var, u.value);
    Expr img = Expr::subst(post, std::move(sigma));
    parts.push_back(t.guard.isLit(1) ? img : mkImplies(t.guard, img));
  }
  if (parts.empty()) return Expr::truth(true);
  return parts.size() == 1 ? parts.front() : Expr::conj(std::move(parts));
}

Expr wlpPath(const Automaton& a, const std::vector<Point>& path, const Expr& post) {
  Expr cur = post;
  for (std::size_t i = path.size(); i-- > 1;) cur = wlpEdge(a, path[i - 1], path[i], cur);
  return cur;
}

std::map<Point, std::set<VarRef>> liveVars(const Automaton& a, const std::map<Point, Expr>& reads) {
  std::map<Point, std::set<VarRef>> live;
  for (const auto& p : a.controls()) live[p];
  for (const auto& [p, e] : reads) collectFreeVars(e, live[p]);
  struct Summary {
    std::set<VarRef> reads;
    std::set<VarRef> writes;
  };
  std::vector<Summary> sums;
  for (const auto& t : a.transitions()) {
    Summary s;
    collectFreeVars(t.guard, s.reads);
    for (const auto& u : t.updates) {
      collectFreeVars(u.value, s.reads);
      s.writes.insert(u.var);
    }
    sums.push_back(std::move(s));
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < a.transitions().size(); ++i) {
      const auto& t = a.transitions()[i];
      auto& dst = live[t.from];
      const std::size_t before = dst.size();
      dst.insert(sums[i].reads.begin(), sums[i].reads.end());
      for (const auto& v : live[t.to])
        if (!sums[i].writes.count(v)) dst.insert(v);
      changed = changed || dst.size() != before;
    }
  }
  return live;
}

const char* verdictName(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

AutTrace Reach::traceTo(std::size_t i) const {
  AutTrace t;
  for (long j = static_cast<long>(i); j >= 0; j = parent[static_cast<std::size_t>(j)])
    t.push_back(states[static_cast<std::size_t>(j)]);
  std::reverse(t.begin(), t.end());
  return t;
}

Reach explore(const Automaton& a, const AutState& start, std::size_t maxSteps) {
  Reach r;
  std::unordered_map<AutState, std::size_t> seen;
  r.states.push_back(start);
  r.parent.push_back(-1);
  r.depth.push_back(0);
  seen.emplace(start, 0);
  for (std::size_t i = 0; i < r.states.size(); ++i) {
    auto succ = a.successors(r.states[i]);
    if (succ.empty()) continue;
    if (r.depth[i] >= maxSteps) {
      r.exhausted = true;
      continue;
    }
    for (auto& n : succ) {
      if (!seen.emplace(n, r.states.size()).second) continue;
      r.states.push_back(std::move(n));
      r.parent.push_back(static_cast<long>(i));
      r.depth.push_back(r.depth[i] + 1);
    }
  }
  return r;
}

std::vector<AutState> initialStates(const Automaton& a, const Formula& pre, const std::set<VarRef>& vars,
                                    const Domain& dom, Exec exec) {
  SearchPlan plan(std::vector<VarRef>(vars.begin(), vars.end()), {pre.expr()}, dom);
  AutState base{a.init(), {}, {}};
  for (const auto& v : a.footprint()) (v.side == Side::Right ? base.right : base.left).set(v.name, dom.lo);
  std::vector<AutState> out;
  for (const auto& row : collect(plan, exec)) {
    AutState s = base;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const VarRef& v = plan.slots().vars()[i];
      (v.side == Side::Right ? s.right : s.left).set(v.name, row[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void requireSpecArity(const Automaton& a, const Formula& f, const char* what) {
  const Arity want = a.paired() ? Arity::Relational : Arity::Unary;
  if (f.arity() != Arity::Neutral && f.arity() != want)
    throw DomainError(std::string(what) + ": expected a " + arityName(want) + " formula, got " + toString(f));
}

}  // namespace

CheckResult satisfiesBounded(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom,
                             std::size_t maxSteps, Exec exec) {
  requireSpecArity(a, pre, "precondition");
  requireSpecArity(a, post, "postcondition");
  auto live = liveVars(a, {{a.init(), pre.expr()}, {a.fin(), post.expr()}});
  auto starts = initialStates(a, pre, live[a.init()], dom, exec);
  struct Outcome {
    bool failed = false;
    bool exhausted = false;
    AutTrace trace;
  };
  std::vector<Outcome> outs(starts.size());
  parallelFor(
      starts.size(),
      [&](std::size_t i) {
        Reach r = explore(a, starts[i], maxSteps);
        outs[i].exhausted = r.exhausted;
        for (std::size_t j = 0; j < r.states.size(); ++j) {
          const auto& s = r.states[j];
          if (s.ctrl == a.fin() && !truthy(post.expr(), Env{&s.left, &s.right})) {
            outs[i].failed = true;
            outs[i].trace = r.traceTo(j);
            return;
          }
        }
      },
      exec);
  CheckResult res;
  for (auto& o : outs) {
    if (o.failed) {
      res.verdict = Verdict::Fails;
      res.stores = Witness{o.trace.front().left, o.trace.front().right};
      res.trace = std::move(o.trace);
      res.note = "terminated trace ends outside the postcondition";
      return res;
    }
  }
  for (const auto& o : outs) {
    if (o.exhausted) {
      res.verdict = Verdict::Inconclusive;
      res.note = "step budget " + std::to_string(maxSteps) + " exhausted";
      return res;
    }
  }
  res.note = std::to_string(starts.size()) + " initial states";
  return res;
}

namespace {

void extendTraces(const Automaton& a, AutTrace& prefix, std::size_t maxSteps, std::size_t maxTraces,
                  std::vector<AutTrace>& out) {
  auto succ = a.successors(prefix.back());
  if (succ.empty() || prefix.size() > maxSteps) {
    if (out.size() >= maxTraces) throw DomainError("autTraces: more than " + std::to_string(maxTraces) + " traces");
    out.push_back(prefix);
    return;
  }
  for (auto& n : succ) {
    prefix.push_back(std::move(n));
    extendTraces(a, prefix, maxSteps, maxTraces, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<AutTrace> autTraces(const Automaton& a, const AutState& start, std::size_t maxSteps,
                                std::size_t maxTraces) {
  std::vector<AutTrace> out;
  AutTrace prefix{start};
  extendTraces(a, prefix, maxSteps, maxTraces, out);
  return out;
}

AutTrace collapseTrace(const CmdTrace& t) {
  AutTrace out;
  for (const auto& k : t) {
    const Label l = lab(*k.cmd);
    if (l < 0) continue;
    out.push_back({Point::unary(l), k.store, {}});
  }
  return out;
}

}  // namespace alignv
