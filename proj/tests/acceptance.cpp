// Acceptance run: one PASS/FAIL line per primary criterion.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>

#include "alignv/extract.hpp"
#include "support.hpp"

using namespace alignv;
using testing::corpus;
using testing::P;
using testing::rel;
using testing::una;

namespace {

constexpr std::size_t kSteps = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      detail = what;
    }
  }
};

const char* kC0 = "y := x; z := 1; while y != 0 do z := z * y; y := y - 1 od";

Outcome structure() {
  Outcome o;
  Program p = parseProgram(kC0);
  o.require(labs(*p.body) == std::vector<Label>{1, 2, 3, 4, 5}, "auto labels of c0");
  Program c0 = corpus("c0.imp");
  Automaton a = autOf(c0);
  std::set<std::pair<Point, Point>> want = {{P(1), P(2)}, {P(2), P(3)}, {P(3), P(4)},
                                            {P(3), P(6)}, {P(4), P(5)}, {P(5), P(3)}};
  o.require(cfgOf(a).edges == want, "CFG of aut(c0; skip^6)");
  auto segs = segments(cfgOf(a), a.init(), a.fin(), {P(1), P(3), P(6)});
  std::set<std::vector<Point>> got(segs.begin(), segs.end());
  std::set<std::vector<Point>> wantSegs = {{P(1), P(2), P(3)}, {P(3), P(4), P(5), P(3)}, {P(3), P(6)}};
  o.require(got == wantSegs, "segments for K = {1, 3, 6}");
  return o;
}

Outcome fsucGoldens() {
  Outcome o;
  Program c0 = corpus("c0.imp");
  o.require(fsuc(3, *c0.body, 6) == 6, "fsuc(3, c0, 6)");
  o.require(fsuc(5, *c0.body, 6) == 3, "fsuc(5, c0, 6)");
  Program c = corpus("cif.imp");
  o.require(fsuc(2, *c.body, 5) == 3, "fsuc(2, c, 5)");
  for (Label n : {1, 3, 4}) o.require(fsuc(n, *c.body, 5) == 5, "fsuc(" + std::to_string(n) + ", c, 5)");
  return o;
}

bool isPrefix(const AutTrace& a, const AutTrace& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

Outcome traceCorrespondence() {
  Outcome o;
  constexpr std::size_t kMax = 2000;
  std::size_t compared = 0;
  for (const auto& name : testing::corpusPrograms()) {
    Program p = corpus(name);
    Automaton a = autOf(p);
    std::vector<std::string> vars;
    for (const auto& v : a.footprint()) vars.push_back(v.name);
    std::vector<Value> vals(vars.size(), -3);
    while (true) {
      Store s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.set(vars[i], vals[i]);
      std::vector<AutTrace> collapsed;
      std::vector<bool> cmdDone;
      for (const auto& t : traces({p.full(), s}, kMax)) {
        collapsed.push_back(collapseTrace(t));
        cmdDone.push_back(step(t.back()).empty());
      }
      auto ats = autTraces(a, AutState{a.init(), s, {}}, kMax);
      for (std::size_t i = 0; i < collapsed.size(); ++i) {
        bool matched = false;
        for (const auto& at : ats) {
          const bool autDone = at.back().ctrl == a.fin();
          if (cmdDone[i] && autDone) matched = matched || collapsed[i] == at;
          else if (!cmdDone[i]) matched = matched || isPrefix(collapsed[i], at) || isPrefix(at, collapsed[i]);
          else matched = matched || isPrefix(at, collapsed[i]);
        }
        o.require(matched, name + ": command trace without automaton counterpart from " + toString(s));
      }
      for (const auto& at : ats) {
        const bool autDone = at.back().ctrl == a.fin();
        bool matched = false;
        for (std::size_t i = 0; i < collapsed.size(); ++i) {
          if (autDone && cmdDone[i]) matched = matched || collapsed[i] == at;
          else if (!autDone) matched = matched || isPrefix(collapsed[i], at) || isPrefix(at, collapsed[i]);
          else matched = matched || isPrefix(collapsed[i], at);
        }
        o.require(matched, name + ": automaton trace without command counterpart from " + toString(s));
      }
      ++compared;
      std::size_t k = 0;
      while (k < vals.size() && vals[k] == 3) vals[k++] = -3;
      if (k == vals.size()) break;
      ++vals[k];
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " initial stores";
  return o;
}

Outcome semanticExamples() {
  Outcome o;
  auto check = [](const char* l, const char* r, const char* pre, const char* post, Domain d) {
    return relSatisfiesBounded(autOf(corpus(l)), autOf(corpus(r)), rel(pre), rel(post), d, kSteps);
  };
  auto inc = check("choice_inc.imp", "choice_inc.imp", "agree(x, x)", "agree(x, x)", Domain{-8, 8});
  o.require(inc.verdict == Verdict::Fails && inc.final && inc.final->left.get("x") != inc.final->right.get("x"),
            "x := x + 1 or x := x + 2 must fail with a witness");
  o.require(check("choice_y.imp", "choice_y.imp", "agree(x, x)", "agree(x, x)", Domain{-8, 8}).verdict ==
                Verdict::Holds,
            "(y := 0 or y := 1); x := x + 1 must hold");
  o.require(check("mono.imp", "mono.imp", "x <= x'", "y <= y'", Domain{-4, 4}).verdict == Verdict::Holds,
            "monotonicity over -4..4");
  return o;
}

Outcome productAdequacy() {
  Outcome o;
  struct Instance {
    const char* left;
    const char* right;
    const char* kind;
    const char* pre;
    const char* post;
    Domain dom;
  };
  const std::vector<Instance> instances = {
      {"c0.imp", "c0.imp", "seq", "agree(x, x)", "agree(z, z)", Domain{0, 4}},
      {"c0.imp", "c0.imp", "elck", "agree(x, x)", "agree(z, z)", Domain{0, 4}},
      {"loop2.imp", "loop3.imp", "elck", "true", "i < i'", Domain{-2, 2}},
      {"loop2.imp", "loop3.imp", "seq", "true", "agree(i, i)", Domain{-2, 2}},
      {"mono.imp", "mono.imp", "ilv", "x <= x'", "y <= y'", Domain{-3, 3}},
      {"swap.imp", "swap.imp", "dov", "agree(x, x) && agree(y, y)", "agree(x, x) && agree(y, y)", Domain{-2, 2}},
      {"cif.imp", "cif.imp", "seq", "agree(x, x)", "agree(y, y)", Domain{-2, 2}},
      {"sum.imp", "sum.imp", "ilv", "n < n'", "s <= s'", Domain{0, 3}},
  };
  int adequate = 0;
  for (const auto& in : instances) {
    Automaton a = autOf(corpus(in.left)), b = autOf(corpus(in.right));
    Automaton prod = buildProduct(a, b, parseProductKind(in.kind));
    std::string tag = std::string(in.left) + "|" + in.right + " " + in.kind;
    if (checkAdequacy(prod, a, b, rel(in.pre), in.dom, 64).verdict != Verdict::Holds) continue;
    ++adequate;
    auto viaProduct = satisfiesBounded(prod, rel(in.pre), rel(in.post), in.dom, kSteps).verdict;
    auto direct = relSatisfiesBounded(a, b, rel(in.pre), rel(in.post), in.dom, kSteps).verdict;
    o.require(viaProduct == direct, tag + ": product " + verdictName(viaProduct) + " vs relational " +
                                        verdictName(direct));
  }
  o.require(adequate >= 5, "only " + std::to_string(adequate) + " adequate instances");
  if (o.pass) o.detail = std::to_string(adequate) + " adequate instances agree";
  return o;
}

Outcome alignedLoopPipeline() {
  Outcome o;
  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  auto spec = testing::caLoopSpec(4);
  Automaton prod = buildProduct(c4, c5, spec);
  auto loaded = testing::loadAnnotation(prod, "c4c5_caloop.ann", true);
  o.require(allHold(checkVCs(prod, loaded.an, Domain{-8, 8})), "enum VCs over -8..8");
  o.require(checkReach(prod, loaded.an, Domain{4, 8}, kSteps).verdict == Verdict::Holds, "reach over 4..8");
  auto x = extractCaWhile(c4, c5, 4, spec.lambda, spec.rho, loaded.an, Domain{-8, 8});
  auto c = checkDerivation(x.derivation);
  o.require(c.accepted, "kernel: " + c.where() + " " + c.reason);
  o.require(x.derivation.conclusion ==
                Judgment::rel(c4.body, c5.body, rel("agree(x, x) && left(x > 3)"), rel("z > z'")),
            "conclusion");
  o.require(semJudgBounded(x.derivation.conclusion, Domain{4, 8}, kSteps).verdict == Verdict::Holds,
            "semantic check over 4..8");
  if (o.pass) o.detail = std::to_string(countNodes(x.derivation)) + " nodes";
  return o;
}

Annotation strongest(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom) {
  auto sa = strongestAnnotation(a, pre, post, dom, kSteps);
  if (!sa.annotation) throw DomainError("no strongest annotation: " + sa.status.note);
  return *sa.annotation;
}

struct Case {
  std::string name;
  Theorem theorem;
  Domain dom;
  std::function<Extraction()> build;
};

std::vector<Case> extractionCases() {
  std::vector<Case> cs;
  auto floyd = [](const char* file, const char* pre, const char* post, Domain d) {
    return [=] {
      Program p = corpus(file);
      return extractFloyd(p, strongest(autOf(p), una(pre), una(post), d), d);
    };
  };
  cs.push_back({"floyd c0", Theorem::Floyd, Domain{-8, 8}, [] {
                  Program c0 = corpus("c0.imp");
                  Automaton a = autOf(c0);
                  auto loaded = testing::loadAnnotation(a, "c0_x4.ann", false);
                  return extractFloyd(c0, extendFull(a, loaded.an, Domain{-8, 8}), Domain{-8, 8});
                }});
  cs.push_back({"floyd swap", Theorem::Floyd, Domain{-3, 3}, floyd("swap.imp", "x = 1 && y = 2", "x = 2 && y = 1",
                                                                   Domain{-3, 3})});
  cs.push_back({"floyd cif", Theorem::Floyd, Domain{-3, 3}, floyd("cif.imp", "true", "x <= 0 || y = x", Domain{-3, 3})});
  cs.push_back({"floyd sum", Theorem::Floyd, Domain{-1, 6}, floyd("sum.imp", "n = 3", "s = 6", Domain{-1, 6})});

  auto product = [](Theorem t, const char* l, const char* r, const char* pre, const char* post, Domain d) {
    return [=] {
      Program p = corpus(l), q = corpus(r);
      ProductKind k = t == Theorem::SeqProd ? ProductKind::Sequential : ProductKind::LockstepControl;
      Annotation an = strongest(buildProduct(p, q, ProductSpec::of(k)), rel(pre), rel(post), d);
      return t == Theorem::SeqProd ? extractSeqProd(p, q, an, d) : extractLockstep(p, q, an, d);
    };
  };
  cs.push_back({"seqprod c0", Theorem::SeqProd, Domain{0, 5},
                product(Theorem::SeqProd, "c0.imp", "c0.imp", "agree(x, x)", "agree(z, z)", Domain{0, 5})});
  cs.push_back({"seqprod swap", Theorem::SeqProd, Domain{-2, 2},
                product(Theorem::SeqProd, "swap.imp", "swap.imp", "agree(x, x) && agree(y, y)",
                        "agree(x, x) && agree(y, y)", Domain{-2, 2})});
  cs.push_back({"seqprod mono", Theorem::SeqProd, Domain{-3, 3},
                product(Theorem::SeqProd, "mono.imp", "mono.imp", "x <= x'", "y <= y'", Domain{-3, 3})});

  cs.push_back({"lockstep c0", Theorem::Lockstep, Domain{0, 5}, [] {
                  Program c0 = corpus("c0.imp");
                  Automaton prod = buildProduct(c0, c0, ProductSpec::of(ProductKind::LockstepControl));
                  auto loaded = testing::loadAnnotation(prod, "c0c0_lock.ann", true);
                  return extractLockstep(c0, c0, loaded.an, Domain{0, 5});
                }});
  cs.push_back({"lockstep cif", Theorem::Lockstep, Domain{-3, 3},
                product(Theorem::Lockstep, "cif.imp", "cif.imp", "agree(x, x)", "agree(x, x)", Domain{-3, 3})});
  cs.push_back({"lockstep sum", Theorem::Lockstep, Domain{-1, 4},
                product(Theorem::Lockstep, "sum.imp", "sum.imp", "agree(n, n)", "agree(s, s)", Domain{-1, 4})});

  auto hole = [](Program c, Program d, Label beg, Label end, const char* pre, const char* post, Domain dom) {
    return [=] {
      ProductSpec s = ProductSpec::of(ProductKind::SameExcept);
      s.beg = beg;
      s.end = end;
      Annotation an = strongest(buildProduct(c, d, s), rel(pre), rel(post), dom);
      return extractLockstepSeq(c, d, beg, end, an, dom);
    };
  };
  cs.push_back({"lockstep-seq conditional", Theorem::LockstepSeq, Domain{-4, 4},
                hole(corpus("hole_left.imp"), corpus("hole_right.imp"), 2, 5, "agree(x, x) && agree(y, y)",
                     "agree(x, x) && agree(y, y)", Domain{-4, 4})});
  cs.push_back({"lockstep-seq assignment", Theorem::LockstepSeq, Domain{-2, 2},
                hole(parseProgram("fin 9\n1: x := 0; 2: y := x + 1; 3: z := y"),
                     parseProgram("fin 9\n1: x := 0; 2: y := 1 + x; 3: z := y"), 2, 3, "true", "agree(z, z)",
                     Domain{-2, 2})});
  cs.push_back({"lockstep-seq whole program", Theorem::LockstepSeq, Domain{-2, 2},
                hole(parseProgram("fin 9\n1: x := x + 1; 2: x := x + 1"), parseProgram("fin 9\n1: x := x + 2"), 1, 9,
                     "agree(x, x)", "agree(x, x)", Domain{-2, 2})});
  return cs;
}

Outcome extractionSuites() {
  Outcome o;
  std::map<Theorem, int> counts;
  for (const auto& c : extractionCases()) {
    try {
      Extraction x = c.build();
      auto k = checkDerivation(x.derivation);
      o.require(k.accepted, c.name + " kernel: " + k.where() + " " + k.reason);
      o.require(auditExtraction(x).ok, c.name + " audit");
      o.require(semJudgBounded(x.derivation.conclusion, c.dom, kSteps).verdict == Verdict::Holds, c.name + " semantics");
      if (k.accepted) ++counts[c.theorem];
    } catch (const std::exception& e) {
      o.require(false, c.name + ": " + e.what());
    }
  }
  for (Theorem t : {Theorem::Floyd, Theorem::SeqProd, Theorem::Lockstep, Theorem::LockstepSeq})
    o.require(counts[t] >= 3, std::string(theoremName(t)) + " has fewer than 3 instances");
  return o;
}

void mutate(Derivation& d, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 4);
  const Formula extra = d.conclusion.relational ? rel("x = 7") : una("x = 7");
  for (;;) {
    switch (pick(rng)) {
      case 0: d.conclusion.pre = conj(d.conclusion.pre, extra); return;
      case 1: d.conclusion.post = disj(d.conclusion.post, extra); return;
      case 2: {
        const auto& rules = allRules();
        Rule r = rules[std::uniform_int_distribution<std::size_t>(0, rules.size() - 1)(rng)];
        if (r == d.rule) continue;
        d.rule = r;
        return;
      }
      case 3:
        if (d.premises.empty()) continue;
        d.premises.pop_back();
        return;
      case 4:
        if (d.sides.empty()) continue;
        d.sides.back().rhs = conj(d.sides.back().rhs, extra);
        return;
    }
  }
}

Outcome negativeControls() {
  Outcome o;
  std::vector<Derivation> bases;
  for (const auto& c : extractionCases())
    if (c.name == "lockstep c0" || c.name == "floyd c0" || c.name == "seqprod c0" ||
        c.name == "lockstep-seq conditional")
      bases.push_back(c.build().derivation);
  std::mt19937 rng(20261016);
  int rejected = 0, changed = 0;
  for (int i = 0; i < 100; ++i) {
    const Derivation& base = bases[static_cast<std::size_t>(i) % bases.size()];
    Derivation m = base;
    const auto n = std::uniform_int_distribution<std::size_t>(0, countNodes(m) - 1)(rng);
    mutate(*nodeAt(m, n), rng);
    const bool sameConclusion = m.conclusion == base.conclusion;
    const bool accepted = checkDerivation(m).accepted;
    if (!accepted) ++rejected;
    else if (!sameConclusion) ++changed;
    o.require(!accepted || !sameConclusion, "mutation " + std::to_string(i) + " at node " + std::to_string(n) +
                                                " accepted with the same conclusion");
  }

  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  Automaton lck = buildProduct(c4, c5, ProductSpec::of(ProductKind::LockstepControl));
  try {
    extractLockstep(c4, c5, strongest(lck, rel("agree(x, x) && left(x > 3)"), rel("true"), Domain{4, 8}),
                    Domain{4, 8});
    o.require(false, "c4|c5 lockstep extraction was not refused");
  } catch (const ExtractionRefused& e) {
    o.require(e.hypothesis() == "test agreement at 5", std::string("wrong refusal: ") + e.what());
  }

  Automaton a = autOf(corpus("loop2.imp")), b = autOf(corpus("loop3.imp"));
  auto olck = checkAdequacy(buildProduct(a, b, ProductSpec::of(ProductKind::OnlyLockstep)), a, b, rel("true"),
                            Domain{-2, 2}, 64);
  o.require(olck.verdict == Verdict::Fails && olck.left && olck.right, "only-lockstep counterexample");
  if (o.pass) o.detail = std::to_string(rejected) + " rejected, " + std::to_string(changed) + " changed conclusion";
  return o;
}

std::string genExpr(std::mt19937& rng, int depth, bool primed) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
  const char* vars[] = {"x", "y"};
  const std::string mark = primed ? "'" : "";
  switch (pick(rng)) {
    case 0: return std::string(vars[rng() % 2]) + mark;
    case 1: return std::to_string(static_cast<int>(rng() % 5) - 2);
    case 2: return "(" + genExpr(rng, depth - 1, primed) + " + " + genExpr(rng, depth - 1, primed) + ")";
    case 3: return "(" + genExpr(rng, depth - 1, primed) + " - " + genExpr(rng, depth - 1, primed) + ")";
    default: return "(" + genExpr(rng, depth - 1, primed) + " * " + genExpr(rng, depth - 1, primed) + ")";
  }
}

std::string genAtom(std::mt19937& rng) {
  const char* ops[] = {" = ", " < ", " <= ", " != "};
  std::string op = ops[rng() % 4];
  switch (rng() % 5) {
    case 0: return "agree(x, " + std::string(rng() % 2 ? "x" : "y") + ")";
    case 1: return "left(" + genExpr(rng, 1, false) + op + genExpr(rng, 1, false) + ")";
    case 2: return "right(" + genExpr(rng, 1, false) + op + genExpr(rng, 1, false) + ")";
    default: return genExpr(rng, 1, rng() % 2) + op + genExpr(rng, 1, rng() % 2);
  }
}

std::string genRel(std::mt19937& rng) {
  switch (rng() % 4) {
    case 0: return genAtom(rng);
    case 1: return genAtom(rng) + " && " + genAtom(rng);
    case 2: return genAtom(rng) + " || !(" + genAtom(rng) + ")";
    default: return "(x = x' || " + genAtom(rng) + ") && " + genAtom(rng);
  }
}

Outcome substitutionEncoding() {
  Outcome o;
  std::mt19937 rng(2);
  const Domain dom{-3, 3};
  for (int i = 0; i < 200; ++i) {
    Formula r = rel(genRel(rng));
    const std::string x = rng() % 2 ? "x" : "y";
    const std::string x2 = rng() % 2 ? "x" : "y";
    Expr e = parseExpr(genExpr(rng, 2, false)), e2 = parseExpr(genExpr(rng, 2, false));
    Formula lhs = encodePlus(substR(r, SideAssign{x, e}, SideAssign{x2, e2}));
    Formula rhs(substitute(encodePlus(r).expr(), {{VarRef{x}, e}, {VarRef{dottedName(x2)}, dotted(e2)}}));
    const bool same = impliesBounded(lhs, rhs, dom).holds && impliesBounded(rhs, lhs, dom).holds;
    o.require(same, "instance " + std::to_string(i) + ": " + toString(r) + " with " + x + " := " + toString(e) +
                        " | " + x2 + " := " + toString(e2));
  }
  if (o.pass) o.detail = "200 instances";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"labelling, CFG and segments of c0", structure},
      {"fsuc golden values", fsucGoldens},
      {"command traces collapse to automaton traces", traceCorrespondence},
      {"relational semantic examples", semanticExamples},
      {"adequate products preserve relational verdicts", productAdequacy},
      {"c4|c5 conditionally aligned loop end to end", alignedLoopPipeline},
      {"extraction suites for Floyd, SeqProd, lockstep and lockstep-seq", extractionSuites},
      {"negative controls", negativeControls},
      {"substitution commutes with the product encoding", substitutionEncoding},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << index << "] " << name;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << " " << secs << "s\n";
  }
  return failed == 0 ? 0 : 1;
}
