#include "alignv/logic.hpp"

#include <map>

#include "alignv/product.hpp"

namespace alignv {

namespace {

struct RuleInfo {
  Rule rule;
  const char* name;
  bool relational;
};

constexpr RuleInfo kRules[] = {
    {Rule::Skip, "Skip", false},       {Rule::Ass, "Ass", false},         {Rule::Seq, "Seq", false},
    {Rule::If, "If", false},           {Rule::Wh, "Wh", false},           {Rule::Choice, "Choice", false},
    {Rule::Conseq, "Conseq", false},   {Rule::DSkip, "dSkip", true},      {Rule::DAss, "dAss", true},
    {Rule::DSeq, "dSeq", true},        {Rule::DIf, "dIf", true},          {Rule::DWh, "dWh", true},
    {Rule::RConseq, "rConseq", true},  {Rule::SeqProd, "SeqProd", true},  {Rule::AssSkip, "AssSkip", true},
    {Rule::SkipSkip, "SkipSkip", true}, {Rule::SeqSkip, "SeqSkip", true}, {Rule::IfSkip, "IfSkip", true},
    {Rule::WhSkip, "WhSkip", true},    {Rule::SkipAss, "SkipAss", true},  {Rule::SkipSeq, "SkipSeq", true},
    {Rule::SkipIf, "SkipIf", true},    {Rule::SkipWh, "SkipWh", true},    {Rule::CaWhile, "caWhile", true},
};

const RuleInfo& info(Rule r) {
  for (const auto& i : kRules)
    if (i.rule == r) return i;
  throw DomainError("unknown rule");
}

}  // namespace

const char* ruleName(Rule r) { return info(r).name; }

std::optional<Rule> ruleFromName(const std::string& name) {
  for (const auto& i : kRules)
    if (name == i.name) return i.rule;
  return std::nullopt;
}

const std::vector<Rule>& allRules() {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> v;
    for (const auto& i : kRules) v.push_back(i.rule);
    return v;
  }();
  return rules;
}

bool isRelationalRule(Rule r) { return info(r).relational; }

std::string DerivCheck::where() const {
  std::string s = "root";
  for (auto i : path) s += "." + std::to_string(i + 1);
  return s;
}

namespace {

struct Mismatch {
  std::string reason;
};

using Kind = Command::Kind;

std::string show(const Formula& f) { return "`" + toString(f) + "`"; }

void require(bool ok, const std::string& reason) {
  if (!ok) throw Mismatch{reason};
}

void sameF(const std::string& what, const Formula& expected, const Formula& got) {
  if (!sameFormula(expected, got)) throw Mismatch{what + ": expected " + show(expected) + ", got " + show(got)};
}

void sameC(const std::string& what, const CommandPtr& expected, const CommandPtr& got) {
  if (got && equalModuloLabels(*expected, *got)) return;
  throw Mismatch{what + ": expected `" + toString(*expected) + "`, got `" + (got ? toString(*got) : "none") + "`"};
}

void kindIs(const std::string& what, const CommandPtr& c, Kind k) {
  require(c && c->kind() == k, what + " must be " + kindName(k) + ", got `" + (c ? toString(*c) : "none") + "`");
}

const CommandPtr& skipCmd() {
  static const CommandPtr s = Command::skip(0);
  return s;
}

struct Expect {
  const Derivation& d;

  const Judgment& concl() const { return d.conclusion; }

  void premiseCount(std::size_t n) const {
    require(d.premises.size() == n, "expected " + std::to_string(n) + " premise(s), got " + std::to_string(d.premises.size()));
  }

  // Premise i (0-based) concludes l [| r] : pre post; null formulas are free.
  const Judgment& premise(std::size_t i, const CommandPtr& l, const CommandPtr& r, const Formula* pre,
                          const Formula* post) const {
    const Judgment& j = d.premises[i].conclusion;
    const std::string tag = "premise " + std::to_string(i + 1);
    require(j.relational == (r != nullptr),
            tag + " must be a " + std::string(r ? "relational" : "unary") + " judgment");
    sameC(tag + " left command", l, j.left);
    if (r) sameC(tag + " right command", r, j.right);
    if (pre) sameF(tag + " precondition", *pre, j.pre);
    if (post) sameF(tag + " postcondition", *post, j.post);
    return j;
  }
};

struct LabelledSide {
  std::string label;
  SideCondition cond;
};

Formula testU(const Expr& e) { return Formula(e); }

std::vector<LabelledSide> checkSchema(const Derivation& d) {
  Expect x{d};
  const Judgment& j = d.conclusion;
  require(j.left != nullptr, "conclusion has no command");
  require(j.relational == isRelationalRule(d.rule),
          std::string(ruleName(d.rule)) + " concludes a " + (isRelationalRule(d.rule) ? "relational" : "unary") +
              " judgment");
  if (j.relational) require(j.right != nullptr, "relational conclusion has no right command");
  if (d.rule != Rule::CaWhile) require(!d.lambda && !d.rho, "only caWhile takes alignment conditions");
  const CommandPtr& c = j.left;
  const CommandPtr& c2 = j.right;
  const Formula& P = j.pre;
  const Formula& Q = j.post;
  std::vector<LabelledSide> sides;

  switch (d.rule) {
    case Rule::Skip:
      kindIs("command", c, Kind::Skip);
      x.premiseCount(0);
      sameF("postcondition", P, Q);
      break;
    case Rule::Ass:
      kindIs("command", c, Kind::Assign);
      x.premiseCount(0);
      sameF("precondition", substU(Q, c->target(), c->expr()), P);
      break;
    case Rule::Seq: {
      kindIs("command", c, Kind::Seq);
      x.premiseCount(2);
      const Judgment& a = x.premise(0, c->first(), nullptr, &P, nullptr);
      x.premise(1, c->second(), nullptr, &a.post, &Q);
      break;
    }
    case Rule::If: {
      kindIs("command", c, Kind::If);
      x.premiseCount(2);
      const Formula t = testU(c->expr());
      const Formula p0 = conj(P, t), p1 = conj(P, neg(t));
      x.premise(0, c->first(), nullptr, &p0, &Q);
      x.premise(1, c->second(), nullptr, &p1, &Q);
      break;
    }
    case Rule::Wh: {
      kindIs("command", c, Kind::While);
      x.premiseCount(1);
      const Formula t = testU(c->expr());
      sameF("postcondition", conj(P, neg(t)), Q);
      const Formula p0 = conj(P, t);
      x.premise(0, c->body(), nullptr, &p0, &P);
      break;
    }
    case Rule::Choice:
      kindIs("command", c, Kind::Choice);
      x.premiseCount(2);
      x.premise(0, c->first(), nullptr, &P, &Q);
      x.premise(1, c->second(), nullptr, &P, &Q);
      break;
    case Rule::Conseq:
    case Rule::RConseq: {
      x.premiseCount(1);
      const Judgment& p = x.premise(0, c, j.relational ? c2 : nullptr, nullptr, nullptr);
      sides.push_back({"premise 1 (P => R)", {P, p.pre}});
      sides.push_back({"premise 3 (S => Q)", {p.post, Q}});
      break;
    }
    case Rule::DSkip:
    case Rule::SkipSkip:
      kindIs("left command", c, Kind::Skip);
      kindIs("right command", c2, Kind::Skip);
      x.premiseCount(0);
      sameF("postcondition", P, Q);
      break;
    case Rule::DAss:
      kindIs("left command", c, Kind::Assign);
      kindIs("right command", c2, Kind::Assign);
      x.premiseCount(0);
      sameF("precondition",
            substR(Q, SideAssign{c->target(), c->expr()}, SideAssign{c2->target(), c2->expr()}), P);
      break;
    case Rule::AssSkip:
      kindIs("left command", c, Kind::Assign);
      kindIs("right command", c2, Kind::Skip);
      x.premiseCount(0);
      sameF("precondition", substR(Q, SideAssign{c->target(), c->expr()}, std::nullopt), P);
      break;
    case Rule::SkipAss:
      kindIs("left command", c, Kind::Skip);
      kindIs("right command", c2, Kind::Assign);
      x.premiseCount(0);
      sameF("precondition", substR(Q, std::nullopt, SideAssign{c2->target(), c2->expr()}), P);
      break;
    case Rule::DSeq: {
      kindIs("left command", c, Kind::Seq);
      kindIs("right command", c2, Kind::Seq);
      x.premiseCount(2);
      const Judgment& a = x.premise(0, c->first(), c2->first(), &P, nullptr);
      x.premise(1, c->second(), c2->second(), &a.post, &Q);
      break;
    }
    case Rule::SeqSkip: {
      kindIs("left command", c, Kind::Seq);
      kindIs("right command", c2, Kind::Skip);
      x.premiseCount(2);
      const Judgment& a = x.premise(0, c->first(), skipCmd(), &P, nullptr);
      x.premise(1, c->second(), skipCmd(), &a.post, &Q);
      break;
    }
    case Rule::SkipSeq: {
      kindIs("left command", c, Kind::Skip);
      kindIs("right command", c2, Kind::Seq);
      x.premiseCount(2);
      const Judgment& a = x.premise(0, skipCmd(), c2->first(), &P, nullptr);
      x.premise(1, skipCmd(), c2->second(), &a.post, &Q);
      break;
    }
    case Rule::DIf: {
      kindIs("left command", c, Kind::If);
      kindIs("right command", c2, Kind::If);
      x.premiseCount(2);
      const Formula l = leftOf(c->expr()), r = rightOf(c2->expr());
      const Formula p0 = conj(conj(P, l), r), p1 = conj(conj(P, neg(l)), neg(r));
      x.premise(0, c->first(), c2->first(), &p0, &Q);
      x.premise(1, c->second(), c2->second(), &p1, &Q);
      sides.push_back({"premise 1 (R => bagree(e, e'))", {P, bagree(c->expr(), c2->expr())}});
      break;
    }
    case Rule::IfSkip: {
      kindIs("left command", c, Kind::If);
      kindIs("right command", c2, Kind::Skip);
      x.premiseCount(2);
      const Formula l = leftOf(c->expr());
      const Formula p0 = conj(P, l), p1 = conj(P, neg(l));
      x.premise(0, c->first(), skipCmd(), &p0, &Q);
      x.premise(1, c->second(), skipCmd(), &p1, &Q);
      break;
    }
    case Rule::SkipIf: {
      kindIs("left command", c, Kind::Skip);
      kindIs("right command", c2, Kind::If);
      x.premiseCount(2);
      const Formula r = rightOf(c2->expr());
      const Formula p0 = conj(P, r), p1 = conj(P, neg(r));
      x.premise(0, skipCmd(), c2->first(), &p0, &Q);
      x.premise(1, skipCmd(), c2->second(), &p1, &Q);
      break;
    }
    case Rule::DWh: {
      kindIs("left command", c, Kind::While);
      kindIs("right command", c2, Kind::While);
      x.premiseCount(1);
      const Formula l = leftOf(c->expr()), r = rightOf(c2->expr());
      sameF("postcondition", conj(conj(P, neg(l)), neg(r)), Q);
      const Formula p0 = conj(conj(P, l), r);
      x.premise(0, c->body(), c2->body(), &p0, &P);
      sides.push_back({"premise 1 (Q => bagree(e, e'))", {P, bagree(c->expr(), c2->expr())}});
      break;
    }
    case Rule::WhSkip: {
      kindIs("left command", c, Kind::While);
      kindIs("right command", c2, Kind::Skip);
      x.premiseCount(1);
      const Formula l = leftOf(c->expr());
      sameF("postcondition", conj(P, neg(l)), Q);
      const Formula p0 = conj(P, l);
      x.premise(0, c->body(), skipCmd(), &p0, &P);
      break;
    }
    case Rule::SkipWh: {
      kindIs("left command", c, Kind::Skip);
      kindIs("right command", c2, Kind::While);
      x.premiseCount(1);
      const Formula r = rightOf(c2->expr());
      sameF("postcondition", conj(P, neg(r)), Q);
      const Formula p0 = conj(P, r);
      x.premise(0, skipCmd(), c2->body(), &p0, &P);
      break;
    }
    case Rule::SeqProd: {
      x.premiseCount(1);
      const CommandPtr prog = Command::seq(c, dotted(c2));
      const Formula pre = encodePlus(P), post = encodePlus(Q);
      x.premise(0, prog, nullptr, &pre, &post);
      break;
    }
    case Rule::CaWhile: {
      kindIs("left command", c, Kind::While);
      kindIs("right command", c2, Kind::While);
      require(d.lambda && d.rho, "caWhile needs both alignment conditions");
      for (const Formula* g : {&*d.lambda, &*d.rho})
        require(g->arity() != Arity::Unary, "caWhile alignment conditions must be relational");
      x.premiseCount(3);
      const Formula& lam = *d.lambda;
      const Formula& rho = *d.rho;
      const Formula l = leftOf(c->expr()), r = rightOf(c2->expr());
      sameF("postcondition", conj(conj(P, neg(l)), neg(r)), Q);
      const Formula p0 = conj({P, l, r, neg(lam), neg(rho)});
      const Formula p1 = conj({P, lam, l});
      const Formula p2 = conj({P, rho, r});
      x.premise(0, c->body(), c2->body(), &p0, &P);
      x.premise(1, c->body(), skipCmd(), &p1, &P);
      x.premise(2, skipCmd(), c2->body(), &p2, &P);
      const Formula cover = disj(disj(bagree(c->expr(), c2->expr()), conj(lam, l)), conj(rho, r));
      sides.push_back({"premise 4 (Q => bagree(e, e') || (L && left(e)) || (R && right(e')))", {P, cover}});
      break;
    }
  }

  for (std::size_t i = 0; i < sides.size(); ++i) {
    require(i < d.sides.size(), sides[i].label + " missing");
    sameF(sides[i].label + " antecedent", sides[i].cond.lhs, d.sides[i].lhs);
    sameF(sides[i].label + " consequent", sides[i].cond.rhs, d.sides[i].rhs);
  }
  require(d.sides.size() == sides.size(), "unexpected side condition(s): " + std::string(ruleName(d.rule)) + " has " +
                                              std::to_string(sides.size()));
  return sides;
}

struct PendingSide {
  std::size_t order;
  std::vector<std::size_t> path;
  Rule rule;
  std::string label;
  SideCondition cond;
  Domain dom;
};

struct Walk {
  const std::optional<Domain>& dom;
  std::vector<PendingSide> sides;
  std::optional<DerivCheck> failure;
  std::size_t failureOrder = 0;
  std::size_t order = 0;

  void visit(const Derivation& d, std::vector<std::size_t>& path) {
    if (failure) return;
    const std::size_t mine = order++;
    try {
      auto expected = checkSchema(d);
      if (!expected.empty()) {
        const std::optional<Domain> nodeDom = dom ? dom : d.domain;
        require(nodeDom.has_value(), "no domain for the side conditions");
        for (auto& s : expected) sides.push_back({mine, path, d.rule, s.label, s.cond, *nodeDom});
      }
    } catch (const Mismatch& m) {
      failure = DerivCheck{false, path, ruleName(d.rule), m.reason, std::nullopt};
      failureOrder = mine;
      return;
    } catch (const DomainError& e) {
      failure = DerivCheck{false, path, ruleName(d.rule), e.what(), std::nullopt};
      failureOrder = mine;
      return;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      path.push_back(i);
      visit(d.premises[i], path);
      path.pop_back();
    }
  }
};

}  // namespace

DerivCheck checkDerivation(const Derivation& d, const std::optional<Domain>& dom, Exec exec) {
  Walk w{dom, {}, std::nullopt};
  std::vector<std::size_t> path;
  w.visit(d, path);
  std::vector<PendingSide> todo;
  for (auto& s : w.sides)
    if (!w.failure || s.order < w.failureOrder) todo.push_back(std::move(s));
  std::vector<std::optional<ImplicationResult>> results(todo.size());
  std::vector<std::string> errors(todo.size());
  parallelFor(
      todo.size(),
      [&](std::size_t i) {
        try {
          results[i] = impliesBounded(todo[i].cond.lhs, todo[i].cond.rhs, todo[i].dom, Exec::Serial);
        } catch (const DomainError& e) {
          errors[i] = e.what();
        }
      },
      exec);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    const auto& s = todo[i];
    if (results[i] && results[i]->holds) continue;
    DerivCheck out{false, s.path, ruleName(s.rule), "", std::nullopt};
    if (!results[i]) {
      out.reason = s.label + ": " + errors[i];
    } else {
      out.reason = s.label + " fails over " + toString(s.dom) + ": " + show(s.cond.lhs) + " => " + show(s.cond.rhs);
      out.witness = results[i]->witness;
    }
    return out;
  }
  if (w.failure) return *w.failure;
  return DerivCheck{};
}

namespace {

Program fresh(const CommandPtr& c) {
  CommandPtr r = relabel(c, 1);
  return Program{r, static_cast<Label>(labs(*r).size()) + 1};
}

}  // namespace

CheckResult semJudgBounded(const Judgment& j, const Domain& dom, std::size_t maxSteps, Exec exec) {
  if (!j.relational) return satisfiesBounded(autOf(fresh(j.left)), j.pre, j.post, dom, maxSteps, exec);
  RelResult r = relSatisfiesBounded(autOf(fresh(j.left)), autOf(fresh(j.right)), j.pre, j.post, dom, maxSteps, exec);
  CheckResult out;
  out.verdict = r.verdict;
  out.stores = r.initial;
  out.note = r.note;
  if (r.final) out.note += "; final stores " + toString(r.final->left) + " | " + toString(r.final->right);
  return out;
}

namespace {

void collectJudgments(const Derivation& d, std::vector<Judgment>& out) {
  bool seen = false;
  for (const auto& j : out)
    if (j == d.conclusion) {
      seen = true;
      break;
    }
  if (!seen) out.push_back(d.conclusion);
  for (const auto& p : d.premises) collectJudgments(p, out);
}

Derivation* nodeAtImpl(Derivation& d, std::size_t& index) {
  if (index == 0) return &d;
  --index;
  for (auto& p : d.premises)
    if (auto* r = nodeAtImpl(p, index)) return r;
  return nullptr;
}

void printNode(const Derivation& d, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  out += pad + ruleName(d.rule) + "  " + toString(d.conclusion) + "\n";
  if (d.lambda) out += pad + "  with L = " + toString(*d.lambda) + ", R = " + toString(*d.rho) + "\n";
  for (const auto& s : d.sides) out += pad + "  side " + toString(s.lhs) + " => " + toString(s.rhs) + "\n";
  for (const auto& p : d.premises) printNode(p, depth + 1, out);
}

}  // namespace

std::vector<Judgment> usedJudgments(const Derivation& d) {
  std::vector<Judgment> out;
  collectJudgments(d, out);
  return out;
}

std::size_t countNodes(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises) n += countNodes(p);
  return n;
}

std::size_t countRule(const Derivation& d, Rule r) {
  std::size_t n = d.rule == r ? 1 : 0;
  for (const auto& p : d.premises) n += countRule(p, r);
  return n;
}

Derivation* nodeAt(Derivation& d, std::size_t index) { return nodeAtImpl(d, index); }

std::string prettyPrint(const Derivation& d) {
  std::string out;
  printNode(d, 0, out);
  return out;
}

}  // namespace alignv
