#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alignv/automaton.hpp"
#include "alignv/judgment.hpp"

namespace alignv {

class Annotation {
 public:
  // Cutset = keys of `at` plus init and fin. Entries for init/fin must agree
  // with pre/post after normalization. With `full`, every control point of
  // `a` is a cutpoint and missing points read as false.
  Annotation(const Automaton& a, Formula pre, Formula post, std::map<Point, Formula> at, bool full = false);

  const Formula& pre() const { return pre_; }
  const Formula& post() const { return post_; }
  const std::map<Point, Formula>& entries() const { return at_; }
  std::set<Point> cutset() const;
  bool has(const Point& p) const { return at_.count(p) != 0; }
  // Throws DomainError when p is not a cutpoint.
  const Formula& operator()(const Point& p) const;
  bool isFull(const Automaton& a) const;

 private:
  Formula pre_;
  Formula post_;
  std::map<Point, Formula> at_;
};

struct VC {
  std::vector<Point> segment;
  Formula pre;  // an(first)
  Formula post;  // an(last)
  // Checked implication lhs => rhs.
  Formula lhs;
  Formula rhs;
  // Transition rule tag for single-step segments, "Generic" otherwise.
  std::string kind;
  // Symbolic rendering in terms of an(.), e.g. "an(1) => an(2)[y := x]".
  std::string rendered;
};

std::vector<VC> genVCs(const Automaton& a, const Annotation& an, const std::optional<Domain>& dom = std::nullopt);

struct VcResult {
  VC vc;
  Verdict verdict = Verdict::Holds;
  std::optional<Witness> witness;
};

// Enumeration mode: every VC is decided over `dom`.
std::vector<VcResult> checkVCs(const Automaton& a, const Annotation& an, const Domain& dom, Exec exec = defaultExec());
bool allHold(const std::vector<VcResult>& rs);

// The same VC decided from its definition: every store satisfying an(first)
// is pushed through segRel and the results are tested against an(last).
VcResult checkVCBySegRel(const Automaton& a, const VC& vc, const Domain& dom);

// Reach mode (necessary condition only): along bounded traces from pre-states,
// every visit to a cutpoint satisfies its assertion.
CheckResult checkReach(const Automaton& a, const Annotation& an, const Domain& dom, std::size_t maxSteps,
                       Exec exec = defaultExec());

// Fills every non-cutpoint with the set of stores reachable there from the
// annotated cutpoints (projected onto the variables live at that point).
// Throws DomainError naming a failing VC when `an` is not valid over dom.
Annotation extendFull(const Automaton& a, const Annotation& an, const Domain& dom, Exec exec = defaultExec());

struct StrongestResult {
  CheckResult status;
  std::optional<Annotation> annotation;
};

// Full annotation whose interior points are the reachable store sets from
// pre-states within dom, provided {pre}{post} holds on bounds.
StrongestResult strongestAnnotation(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom,
                                    std::size_t maxSteps, Exec exec = defaultExec());

// Judgment families read off a full annotation of aut(p).
std::vector<Judgment> associatedJudgments(const Program& p, const Annotation& an);
// The same families for the subprograms of `root` (a subterm of `whole`),
// reading the annotation at label n as at(n).
std::vector<Judgment> floydFamily(const CommandPtr& root, const Command& whole, Label fin,
                                  const std::function<Formula(Label)>& at);

}  // namespace alignv
