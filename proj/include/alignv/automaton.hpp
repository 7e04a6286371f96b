#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "alignv/assertion.hpp"
#include "alignv/lang.hpp"
#include "alignv/point.hpp"
#include "alignv/semantics.hpp"

namespace alignv {

// Simultaneous assignment performed by a transition; `value` reads the
// pre-state.
struct Update {
  VarRef var;
  Expr value;
};

// Guarded deterministic move. A Floyd automaton's step relation is the union
// of its transitions: (n, s) -> (m, t) iff some transition from n to m has a
// guard true at s and maps s to t.
struct Transition {
  Point from;
  Point to;
  Expr guard;
  std::vector<Update> updates;
  // Human-readable rule tag (e.g. "Assign", "WhileExit", "Left:IfTrue").
  std::string kind;
};

struct AutState {
  Point ctrl;
  Store left;
  Store right;

  friend bool operator==(const AutState&, const AutState&) = default;
};

using AutTrace = std::vector<AutState>;

std::string toString(const AutState& s, bool paired);
std::string toString(const AutTrace& t, bool paired);

class Automaton {
 public:
  // Rejects transitions leaving fin and self-loops (finality and
  // non-stuttering).
  Automaton(bool paired, Point init, Point fin, std::vector<Point> ctrl, std::vector<Transition> ts,
            std::set<VarRef> footprint);

  bool paired() const { return paired_; }
  const Point& init() const { return init_; }
  const Point& fin() const { return fin_; }
  const std::vector<Point>& controls() const { return ctrl_; }
  bool hasControl(const Point& p) const { return index_.count(p) != 0; }
  const std::vector<Transition>& transitions() const { return ts_; }
  const std::vector<std::size_t>& outgoing(const Point& p) const;
  const std::set<VarRef>& footprint() const { return footprint_; }

  bool enabled(const Transition& t, const AutState& s) const;
  AutState fire(const Transition& t, const AutState& s) const;
  std::vector<AutState> successors(const AutState& s) const;

 private:
  bool paired_;
  Point init_;
  Point fin_;
  std::vector<Point> ctrl_;
  std::vector<Transition> ts_;
  std::unordered_map<Point, std::vector<std::size_t>> out_;
  std::unordered_map<Point, std::size_t> index_;
  std::set<VarRef> footprint_;
};

// aut(c; skip^fin). Requires ok(p); label 0 is refused on assignments and
// loops, whose transient skip^-0 would be read as a real control point.
Automaton autOf(const Program& p);

struct Cfg {
  std::vector<Point> nodes;
  std::set<std::pair<Point, Point>> edges;

  std::vector<Point> successors(const Point& n) const;
  bool hasEdge(const Point& a, const Point& b) const { return edges.count({a, b}) != 0; }
};

// Program automata: one edge per transition. Paired automata, when a domain
// is given, keep an edge only if one of its guards is satisfiable over it.
Cfg cfgOf(const Automaton& a, const std::optional<Domain>& dom = std::nullopt);
std::string toDot(const Cfg& g, const Point& init, const std::string& name = "cfg");

struct CutsetCheck {
  bool ok = true;
  std::string reason;
  std::vector<Point> cycle;
};

CutsetCheck validateCutset(const Cfg& g, const Point& init, const Point& fin, const std::set<Point>& k);
// Throws DomainError for an invalid cutset, naming an uncut cycle.
std::vector<std::vector<Point>> segments(const Cfg& g, const Point& init, const Point& fin, const std::set<Point>& k);

std::string toString(const std::vector<Point>& path);

// End states of runs that follow `path` exactly.
std::vector<AutState> segRel(const Automaton& a, const std::vector<Point>& path, const AutState& start);

// Weakest liberal precondition of `post` across one CFG edge (all
// transitions between the two points) and along a path.
Expr wlpEdge(const Automaton& a, const Point& from, const Point& to, const Expr& post);
Expr wlpPath(const Automaton& a, const std::vector<Point>& path, const Expr& post);

// Variables whose initial value at each point can influence a guard, an
// update, or one of the given assertions reached later (including the one at
// the point itself).
std::map<Point, std::set<VarRef>> liveVars(const Automaton& a, const std::map<Point, Expr>& reads);

enum class Verdict : std::uint8_t { Holds, Fails, Inconclusive };
const char* verdictName(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Holds;
  std::optional<AutTrace> trace;
  std::optional<Witness> stores;
  std::string note;
};

// Bounded reachability from one state, breadth first with a global visited
// set; `exhausted` means some state at depth maxSteps still had successors.
struct Reach {
  std::vector<AutState> states;
  std::vector<long> parent;
  std::vector<std::size_t> depth;
  bool exhausted = false;

  AutTrace traceTo(std::size_t i) const;
};

Reach explore(const Automaton& a, const AutState& start, std::size_t maxSteps);

// Initial states: stores over `vars` satisfying `pre` in `dom`, every other
// footprint variable bound to dom.lo.
std::vector<AutState> initialStates(const Automaton& a, const Formula& pre, const std::set<VarRef>& vars,
                                    const Domain& dom, Exec exec = defaultExec());

// A |= {P}{Q} (unary) or Π |= {R}{S} (paired) on bounded initial stores.
CheckResult satisfiesBounded(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom,
                             std::size_t maxSteps, Exec exec = defaultExec());

// All maximal traces from `start` with at most maxSteps steps (longer ones
// are cut at maxSteps); throws DomainError beyond maxTraces.
std::vector<AutTrace> autTraces(const Automaton& a, const AutState& start, std::size_t maxSteps,
                                std::size_t maxTraces = 4096);

// Command trace of c;skip^fin as an automaton trace: configurations whose
// command starts with a negative label are transient and dropped, the rest
// map to (lab(cmd), store).
AutTrace collapseTrace(const CmdTrace& t);

}  // namespace alignv

template <>
struct std::hash<alignv::AutState> {
  std::size_t operator()(const alignv::AutState& s) const noexcept {
    return alignv::hashCombine(std::hash<alignv::Point>{}(s.ctrl), alignv::hashCombine(s.left.hash(), s.right.hash()));
  }
};
