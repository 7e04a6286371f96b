#include "alignv/annotation.hpp"

#include <algorithm>
#include <unordered_set>

namespace alignv {

Annotation::Annotation(const Automaton& a, Formula pre, Formula post, std::map<Point, Formula> at, bool full)
    : pre_(std::move(pre)), post_(std::move(post)), at_(std::move(at)) {
  for (const auto& [p, f] : at_)
    if (!a.hasControl(p)) throw DomainError("annotation: " + toString(p) + " is not a control point");
  auto pin = [&](const Point& p, const Formula& f, const char* what) {
    auto it = at_.find(p);
    if (it != at_.end() && !sameFormula(it->second, f))
      throw DomainError(std::string("annotation: entry at ") + what + " " + toString(p) + " differs from the " +
                        (p == a.init() ? "precondition" : "postcondition"));
    at_.insert_or_assign(p, f);
  };
  pin(a.init(), pre_, "init");
  pin(a.fin(), post_, "fin");
  if (full)
    for (const auto& p : a.controls()) at_.try_emplace(p, Formula::falsity());
}

std::set<Point> Annotation::cutset() const {
  std::set<Point> k;
  for (const auto& [p, f] : at_) k.insert(p);
  return k;
}

const Formula& Annotation::operator()(const Point& p) const {
  auto it = at_.find(p);
  if (it == at_.end()) throw DomainError("annotation: " + toString(p) + " is not a cutpoint");
  return it->second;
}

bool Annotation::isFull(const Automaton& a) const {
  return std::all_of(a.controls().begin(), a.controls().end(), [&](const Point& p) { return has(p); });
}

namespace {

std::string anName(const Point& p) {
  std::string s = toString(p);
  if (!s.empty() && s.front() == '(') return "an" + s;
  return "an(" + s + ")";
}

std::string renderUpdates(const std::vector<Update>& us) {
  std::string out = "[";
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i) out += ", ";
    out += toString(us[i].var) + " := " + toString(us[i].value);
  }
  return out + "]";
}

}  // namespace

std::vector<VC> genVCs(const Automaton& a, const Annotation& an, const std::optional<Domain>& dom) {
  const Cfg g = cfgOf(a, dom);
  std::vector<VC> out;
  for (const auto& seg : segments(g, a.init(), a.fin(), an.cutset())) {
    VC vc;
    vc.segment = seg;
    vc.pre = an(seg.front());
    vc.post = an(seg.back());
    const Transition* only = nullptr;
    if (seg.size() == 2) {
      int count = 0;
      for (std::size_t ti : a.outgoing(seg[0]))
        if (a.transitions()[ti].to == seg[1]) {
          only = &a.transitions()[ti];
          ++count;
        }
      if (count != 1) only = nullptr;
    }
    if (only) {
      vc.kind = only->kind;
      Substitution sigma;
      for (const auto& u : only->updates) sigma.emplace_back(u.var, u.value);
      vc.lhs = only->guard.isLit(1) ? vc.pre : Formula(mkAnd(vc.pre.expr(), only->guard));
      vc.rhs = Formula(Expr::subst(vc.post.expr(), std::move(sigma)));
      vc.rendered = anName(seg[0]);
      if (!only->guard.isLit(1)) vc.rendered += " && " + toFormulaString(only->guard);
      vc.rendered += " => " + anName(seg[1]);
      if (!only->updates.empty()) vc.rendered += renderUpdates(only->updates);
    } else {
      vc.kind = "Generic";
      vc.lhs = vc.pre;
      vc.rhs = Formula(wlpPath(a, seg, vc.post.expr()));
      vc.rendered = anName(seg.front()) + " => wlp(" + toString(seg) + ", " + anName(seg.back()) + ")";
    }
    out.push_back(std::move(vc));
  }
  return out;
}

std::vector<VcResult> checkVCs(const Automaton& a, const Annotation& an, const Domain& dom, Exec exec) {
  auto vcs = genVCs(a, an, dom);
  std::vector<VcResult> out(vcs.size());
  parallelFor(
      vcs.size(),
      [&](std::size_t i) {
        out[i].vc = vcs[i];
        auto r = impliesBounded(vcs[i].lhs, vcs[i].rhs, dom, exec == Exec::Parallel && vcs.size() > 1 ? Exec::Serial : exec);
        out[i].verdict = r.holds ? Verdict::Holds : Verdict::Fails;
        out[i].witness = r.witness;
      },
      exec);
  return out;
}

bool allHold(const std::vector<VcResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const VcResult& r) { return r.verdict == Verdict::Holds; });
}

VcResult checkVCBySegRel(const Automaton& a, const VC& vc, const Domain& dom) {
  std::set<VarRef> vs = freeVars(vc.lhs.expr());
  collectFreeVars(vc.rhs.expr(), vs);
  SearchPlan plan(std::vector<VarRef>(vs.begin(), vs.end()), {vc.pre.expr()}, dom);
  VcResult res;
  res.vc = vc;
  for (const auto& row : collectSerial(plan)) {
    Witness w = splitAssignment(plan.slots(), row);
    for (const auto& t : segRel(a, vc.segment, AutState{vc.segment.front(), w.left, w.right})) {
      if (!truthy(vc.post.expr(), Env{&t.left, &t.right})) {
        res.verdict = Verdict::Fails;
        res.witness = w;
        return res;
      }
    }
  }
  return res;
}

CheckResult checkReach(const Automaton& a, const Annotation& an, const Domain& dom, std::size_t maxSteps, Exec exec) {
  std::map<Point, Expr> reads;
  for (const auto& [p, f] : an.entries()) reads.emplace(p, f.expr());
  auto live = liveVars(a, reads);
  auto starts = initialStates(a, an.pre(), live[a.init()], dom, exec);
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
          auto it = an.entries().find(s.ctrl);
          if (it != an.entries().end() && !truthy(it->second.expr(), Env{&s.left, &s.right})) {
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
      res.note = "assertion at " + toString(o.trace.back().ctrl) + " violated";
      res.stores = Witness{o.trace.back().left, o.trace.back().right};
      res.trace = std::move(o.trace);
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
  res.note = std::to_string(starts.size()) + " initial states (necessary condition only)";
  return res;
}

namespace {

using Row = std::vector<Value>;

Row project(const AutState& s, const std::vector<VarRef>& vars) {
  Row r;
  r.reserve(vars.size());
  for (const auto& v : vars) r.push_back((v.side == Side::Right ? s.right : s.left).get(v.name));
  return r;
}

Formula extensional(const std::vector<VarRef>& vars, std::set<Row> rows) {
  if (rows.empty()) return Formula::falsity();
  if (vars.empty()) return Formula::truth();
  return Formula(Expr::set(std::make_shared<StoreSet>(vars, std::vector<Row>(rows.begin(), rows.end()))));
}

AutState stateFrom(const Point& p, const SlotMap& slots, const Assignment& row) {
  AutState s{p, {}, {}};
  for (std::size_t i = 0; i < row.size(); ++i) {
    const VarRef& v = slots.vars()[i];
    (v.side == Side::Right ? s.right : s.left).set(v.name, row[i]);
  }
  return s;
}

}  // namespace

Annotation extendFull(const Automaton& a, const Annotation& an, const Domain& dom, Exec exec) {
  for (const auto& r : checkVCs(a, an, dom, exec)) {
    if (r.verdict == Verdict::Fails) {
      std::string at = r.witness ? " at " + toString(r.witness->left) + (a.paired() ? " | " + toString(r.witness->right) : "") : "";
      throw DomainError("extendFull: annotation is not valid over " + toString(dom) + ": VC " + toString(r.vc.segment) +
                        " (" + r.vc.rendered + ") fails" + at);
    }
  }
  if (an.isFull(a)) return an;
  std::map<Point, Expr> reads;
  for (const auto& [p, f] : an.entries()) reads.emplace(p, f.expr());
  auto live = liveVars(a, reads);
  const std::set<Point> k = an.cutset();
  const std::vector<Point> ks(k.begin(), k.end());
  std::vector<std::map<Point, std::set<Row>>> parts(ks.size());
  parallelFor(
      ks.size(),
      [&](std::size_t i) {
        const Point& from = ks[i];
        const auto& vars = live.at(from);
        SearchPlan plan(std::vector<VarRef>(vars.begin(), vars.end()), {an(from).expr()}, dom);
        std::vector<AutState> stack;
        for (const auto& row : collectSerial(plan)) stack.push_back(stateFrom(from, plan.slots(), row));
        auto& mine = parts[i];
        while (!stack.empty()) {
          AutState s = std::move(stack.back());
          stack.pop_back();
          for (auto& n : a.successors(s)) {
            if (k.count(n.ctrl)) continue;
            const auto& lv = live.at(n.ctrl);
            std::vector<VarRef> vs(lv.begin(), lv.end());
            if (mine[n.ctrl].insert(project(n, vs)).second) stack.push_back(std::move(n));
          }
        }
      },
      exec);
  std::map<Point, Formula> entries = an.entries();
  for (const auto& p : a.controls()) {
    if (k.count(p)) continue;
    std::set<Row> rows;
    for (auto& part : parts) {
      auto it = part.find(p);
      if (it != part.end()) rows.insert(it->second.begin(), it->second.end());
    }
    const auto& lv = live.at(p);
    entries[p] = extensional(std::vector<VarRef>(lv.begin(), lv.end()), std::move(rows));
  }
  return Annotation(a, an.pre(), an.post(), std::move(entries), true);
}

StrongestResult strongestAnnotation(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom,
                                    std::size_t maxSteps, Exec exec) {
  StrongestResult out;
  out.status = satisfiesBounded(a, pre, post, dom, maxSteps, exec);
  if (out.status.verdict != Verdict::Holds) return out;
  auto live = liveVars(a, {{a.init(), pre.expr()}, {a.fin(), post.expr()}});
  auto starts = initialStates(a, pre, live[a.init()], dom, exec);
  std::vector<std::map<Point, std::set<Row>>> parts(starts.size());
  parallelFor(
      starts.size(),
      [&](std::size_t i) {
        Reach r = explore(a, starts[i], maxSteps);
        for (const auto& s : r.states) {
          const auto& lv = live.at(s.ctrl);
          parts[i][s.ctrl].insert(project(s, std::vector<VarRef>(lv.begin(), lv.end())));
        }
      },
      exec);
  std::map<Point, Formula> entries;
  for (const auto& p : a.controls()) {
    if (p == a.init() || p == a.fin()) continue;
    std::set<Row> rows;
    for (auto& part : parts) {
      auto it = part.find(p);
      if (it != part.end()) rows.insert(it->second.begin(), it->second.end());
    }
    const auto& lv = live.at(p);
    entries[p] = extensional(std::vector<VarRef>(lv.begin(), lv.end()), std::move(rows));
  }
  out.annotation.emplace(a, pre, post, std::move(entries), true);
  return out;
}

std::vector<Judgment> floydFamily(const CommandPtr& root, const Command& whole, Label fin,
                                  const std::function<Formula(Label)>& at) {
  const Command& c = whole;
  auto exitOf = [&](const Command& b) { return at(elab(b, c, fin)); };
  std::vector<Judgment> out;
  auto add = [&](const CommandPtr& b, const Formula& pre, const Formula& post) {
    Judgment j = Judgment::unary(b, pre, post);
    if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(std::move(j));
  };
  auto test = [](const Formula& f, const Expr& e) { return conj(f, Formula(e)); };
  std::function<void(const CommandPtr&)> visit = [&](const CommandPtr& b) {
    add(b, at(lab(*b)), exitOf(*b));
    switch (b->kind()) {
      case Command::Kind::Assign: {
        Formula post = exitOf(*b);
        add(b, substU(post, b->target(), b->expr()), post);
        break;
      }
      case Command::Kind::While: {
        const Formula inv = at(b->label());
        add(b, inv, test(inv, mkNot(b->expr())));
        add(b->body(), test(at(lab(*b->body())), b->expr()), exitOf(*b->body()));
        add(b->body(), test(inv, b->expr()), exitOf(*b->body()));
        break;
      }
      case Command::Kind::If: {
        const Formula head = at(b->label());
        add(b->first(), test(at(lab(*b->first())), b->expr()), exitOf(*b->first()));
        add(b->first(), test(head, b->expr()), exitOf(*b->first()));
        add(b->second(), test(at(lab(*b->second())), mkNot(b->expr())), exitOf(*b->second()));
        add(b->second(), test(head, mkNot(b->expr())), exitOf(*b->second()));
        break;
      }
      case Command::Kind::Choice: {
        const Formula head = at(b->label());
        add(b->first(), head, exitOf(*b->first()));
        add(b->second(), head, exitOf(*b->second()));
        break;
      }
      default:
        break;
    }
    if (b->first()) visit(b->first());
    if (b->second()) visit(b->second());
  };
  visit(root);
  return out;
}

std::vector<Judgment> associatedJudgments(const Program& p, const Annotation& an) {
  return floydFamily(p.body, *p.body, p.fin, [&](Label n) { return an(Point::unary(n)); });
}

}  // namespace alignv
