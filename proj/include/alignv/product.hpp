#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>

#include "alignv/automaton.hpp"

namespace alignv {

enum class ProductKind : std::uint8_t {
  OnlyLockstep,
  LeftOnly,
  RightOnly,
  Interleaved,
  EagerLockstep,
  Sequential,
  CtrlConditioned,
  LockstepControl,
  Dovetail,
  SameExcept,
  CaLoop,
};

const char* kindName(ProductKind k);

struct ProductSpec {
  ProductKind kind = ProductKind::Sequential;
  // CtrlConditioned: source pairs enabling left, right and joint steps.
  std::set<std::pair<Label, Label>> left, right, joint;
  // SameExcept: first label and exit label of the replaced subprograms.
  // CaLoop: label of the distinguished loop.
  Label beg = 0;
  Label end = 0;
  // CaLoop guards for one-sided iterations (relational).
  Formula lambda = Formula::falsity();
  Formula rho = Formula::falsity();

  static ProductSpec of(ProductKind k) {
    ProductSpec s;
    s.kind = k;
    return s;
  }
};

// Parses seq | elck | olck | lckctl | ilv | lo | ro | dov |
// sameexcept:BEG,END | caloop:BEG (guards are supplied separately).
ProductSpec parseProductKind(const std::string& text);

// Products defined for arbitrary automata (every kind except SameExcept and
// CaLoop, which need the program text).
Automaton buildProduct(const Automaton& a, const Automaton& b, const ProductSpec& spec);
// Any kind; checks the kind's precondition on the programs and names the
// failing clause.
Automaton buildProduct(const Program& p, const Program& q, const ProductSpec& spec);

struct SameExceptInfo {
  bool ok = false;
  std::string clause;  // failing clause
  std::string reason;
  CommandPtr b;
  CommandPtr b2;
  // Contexts with the hole filled by skip^beg.
  CommandPtr context;
  CommandPtr context2;
};

// Locates b (resp. b') as the innermost subprogram starting at beg whose exit
// label is end, then checks the five sameExcept clauses.
SameExceptInfo sameExcept(const Program& p, const Program& q, Label beg, Label end);

// destutter(map(left, T)) and the right analogue.
AutTrace projectLeft(const AutTrace& t);
AutTrace projectRight(const AutTrace& t);

// Every successor of s in the product is a step of a, a step of b, or both.
bool projectsCorrectly(const Automaton& prod, const Automaton& a, const Automaton& b, const AutState& s);

struct AdequacyResult {
  Verdict verdict = Verdict::Holds;  // Holds means adequate on the bounds
  std::optional<AutTrace> left;
  std::optional<AutTrace> right;
  std::size_t pairs = 0;
  std::string note;
};

// Every pair of terminated initial traces (length <= maxLen steps) from
// R-related stores over dom has a product trace projecting onto it.
AdequacyResult checkAdequacy(const Automaton& prod, const Automaton& a, const Automaton& b, const Formula& r,
                             const Domain& dom, std::size_t maxLen, Exec exec = defaultExec());

struct RelResult {
  Verdict verdict = Verdict::Holds;
  std::optional<Witness> initial;
  std::optional<Witness> final;
  std::string note;
};

// Product-free oracle for A|A' |= <R><S>: runs both sides independently from
// R-related stores and checks S on every pair of final stores.
RelResult relSatisfiesBounded(const Automaton& a, const Automaton& b, const Formula& r, const Formula& s,
                              const Domain& dom, std::size_t maxSteps, Exec exec = defaultExec());

// Variables of a unary automaton seen through one side of a pair.
std::set<VarRef> sided(const std::set<VarRef>& vs, Side side);

}  // namespace alignv
