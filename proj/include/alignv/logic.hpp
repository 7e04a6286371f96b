#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alignv/automaton.hpp"
#include "alignv/judgment.hpp"

namespace alignv {

enum class Rule : std::uint8_t {
  // Hoare logic
  Skip,
  Ass,
  Seq,
  If,
  Wh,
  Choice,
  Conseq,
  // lockstep (diagonal)
  DSkip,
  DAss,
  DSeq,
  DIf,
  DWh,
  RConseq,
  // sequential product
  SeqProd,
  // one-sided, left program steps
  AssSkip,
  SkipSkip,
  SeqSkip,
  IfSkip,
  WhSkip,
  // one-sided, right program steps
  SkipAss,
  SkipSeq,
  SkipIf,
  SkipWh,
  // conditionally aligned loops
  CaWhile,
};

const char* ruleName(Rule r);
std::optional<Rule> ruleFromName(const std::string& name);
const std::vector<Rule>& allRules();
bool isRelationalRule(Rule r);

struct SideCondition {
  Formula lhs;
  Formula rhs;
};

struct Derivation {
  Rule rule = Rule::Skip;
  Judgment conclusion;
  std::vector<Derivation> premises;
  // Implications in the order the rule lists them: Conseq/rConseq
  // [P => R, S => Q]; dIf/dWh/caWhile a single condition.
  std::vector<SideCondition> sides;
  // caWhile only: the one-sided alignment conditions.
  std::optional<Formula> lambda;
  std::optional<Formula> rho;
  // Domain over which the side conditions were established.
  std::optional<Domain> domain;
};

struct DerivCheck {
  bool accepted = true;
  // Premise indices from the root to the failing node.
  std::vector<std::size_t> path;
  std::string rule;
  std::string reason;
  std::optional<Witness> witness;

  std::string where() const;
};

// Checks every node against its rule schema (commands compared modulo
// labels, formulas modulo normalization) and decides every side condition by
// impliesBounded. The domain argument overrides the domains recorded in the
// nodes; without it each node must carry its own.
DerivCheck checkDerivation(const Derivation& d, const std::optional<Domain>& dom = std::nullopt,
                           Exec exec = defaultExec());

// Bounded semantic truth of a judgment: run (unary) or relSatisfiesBounded
// (relational) on fresh labellings of its commands.
CheckResult semJudgBounded(const Judgment& j, const Domain& dom, std::size_t maxSteps, Exec exec = defaultExec());

// Distinct conclusions of every node, in preorder.
std::vector<Judgment> usedJudgments(const Derivation& d);

std::size_t countNodes(const Derivation& d);
std::size_t countRule(const Derivation& d, Rule r);
// Preorder node access, used by mutation tests.
Derivation* nodeAt(Derivation& d, std::size_t index);

std::string prettyPrint(const Derivation& d);

}  // namespace alignv
