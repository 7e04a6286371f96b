#include <doctest.h>

#include "alignv/extract.hpp"
#include "alignv/sexpr.hpp"
#include "support.hpp"

using namespace alignv;
using testing::corpus;
using testing::rel;
using testing::una;

namespace {

constexpr std::size_t kSteps = 10000;

void accepted(const Extraction& x, const Domain& semDom) {
  auto c = checkDerivation(x.derivation);
  CHECK_MESSAGE(c.accepted, c.where() << " " << c.rule << ": " << c.reason);
  auto audit = auditExtraction(x);
  CHECK(audit.ok);
  for (const auto& o : audit.offending) MESSAGE(o);
  CHECK(semJudgBounded(x.derivation.conclusion, semDom, kSteps).verdict == Verdict::Holds);
  auto back = readDerivation(writeDerivation(x.derivation));
  CHECK(checkDerivation(back).accepted);
}

bool anyUnary(const Derivation& d) {
  if (!d.conclusion.relational) return true;
  for (const auto& p : d.premises)
    if (d.rule != Rule::SeqProd && anyUnary(p)) return true;
  return false;
}

Annotation strongest(const Automaton& a, const Formula& pre, const Formula& post, const Domain& dom) {
  auto sa = strongestAnnotation(a, pre, post, dom, kSteps);
  REQUIRE(sa.status.verdict == Verdict::Holds);
  return *sa.annotation;
}

Extraction floyd(const Program& p, const char* pre, const char* post, const Domain& dom) {
  Automaton a = autOf(p);
  return extractFloyd(p, strongest(a, una(pre), una(post), dom), dom);
}

Extraction seqProd(const Program& c, const Program& d, const char* pre, const char* post, const Domain& dom) {
  Automaton prod = buildProduct(c, d, ProductSpec::of(ProductKind::Sequential));
  return extractSeqProd(c, d, strongest(prod, rel(pre), rel(post), dom), dom);
}

Extraction lockstep(const Program& c, const Program& d, const char* pre, const char* post, const Domain& dom) {
  Automaton prod = buildProduct(c, d, ProductSpec::of(ProductKind::LockstepControl));
  return extractLockstep(c, d, strongest(prod, rel(pre), rel(post), dom), dom);
}

Extraction lockstepSeq(const Program& c, const Program& d, Label beg, Label end, const char* pre, const char* post,
                       const Domain& dom) {
  ProductSpec s = ProductSpec::of(ProductKind::SameExcept);
  s.beg = beg;
  s.end = end;
  Automaton prod = buildProduct(c, d, s);
  return extractLockstepSeq(c, d, beg, end, strongest(prod, rel(pre), rel(post), dom), dom);
}

}  // namespace

TEST_CASE("Floyd extraction") {
  SUBCASE("c0 from the extensional cut annotation") {
    Program c0 = corpus("c0.imp");
    Automaton a = autOf(c0);
    auto loaded = testing::loadAnnotation(a, "c0_x4.ann", false);
    Annotation full = extendFull(a, loaded.an, Domain{-8, 8});
    auto x = extractFloyd(c0, full, Domain{-8, 8});
    accepted(x, Domain{-8, 8});
    CHECK(x.derivation.conclusion == Judgment::unary(c0.body, una("x = 4"), una("z = 24")));
    CHECK(countRule(x.derivation, Rule::Wh) == 1);
  }
  SUBCASE("skip") {
    Program p = corpus("skip.imp");
    auto x = floyd(p, "x > 0", "x > 0", Domain{-3, 3});
    accepted(x, Domain{-3, 3});
    CHECK(countRule(x.derivation, Rule::Skip) == 1);
  }
  SUBCASE("assignments only") {
    auto x = floyd(corpus("swap.imp"), "x = 1 && y = 2", "x = 2 && y = 1", Domain{-3, 3});
    accepted(x, Domain{-3, 3});
    CHECK(countRule(x.derivation, Rule::Ass) == 3);
    CHECK(countRule(x.derivation, Rule::Conseq) >= 1);
  }
  SUBCASE("conditional") { accepted(floyd(corpus("cif.imp"), "true", "x <= 0 || y = x", Domain{-3, 3}), Domain{-3, 3}); }
  SUBCASE("summation loop") { accepted(floyd(corpus("sum.imp"), "n = 3", "s = 6", Domain{-1, 6}), Domain{-1, 6}); }
}

TEST_CASE("Floyd extraction refuses an invalid annotation") {
  Program c0 = corpus("c0.imp");
  Automaton a = autOf(c0);
  Annotation full = strongest(a, una("x = 4"), una("z = 24"), Domain{-8, 8});
  std::map<Point, Formula> at(full.entries().begin(), full.entries().end());
  at.insert_or_assign(testing::P(4), una("z = 0"));
  Annotation bad(a, una("x = 4"), una("z = 24"), at, true);
  try {
    extractFloyd(c0, bad, Domain{-8, 8});
    FAIL("expected a refusal");
  } catch (const ExtractionRefused& e) {
    CHECK(e.hypothesis() == "valid annotation");
  }
}

TEST_CASE("SeqProd extraction") {
  SUBCASE("c0 against itself") {
    Program c0 = corpus("c0.imp");
    auto x = seqProd(c0, c0, "agree(x, x)", "agree(z, z)", Domain{0, 5});
    accepted(x, Domain{0, 5});
    CHECK(x.derivation.rule == Rule::SeqProd);
    CHECK(countRule(x.derivation, Rule::SeqProd) == 1);
  }
  SUBCASE("skip against skip") {
    Program s = corpus("skip.imp");
    auto x = seqProd(s, s, "x < x'", "x < x'", Domain{-2, 2});
    accepted(x, Domain{-2, 2});
    CHECK(countRule(x.derivation, Rule::Skip) == 2);
    CHECK(countRule(x.derivation, Rule::SeqProd) == 1);
  }
  SUBCASE("swap against itself") {
    Program p = corpus("swap.imp");
    auto x = seqProd(p, p, "agree(x, x) && agree(y, y)", "agree(x, x) && agree(y, y)", Domain{-2, 2});
    accepted(x, Domain{-2, 2});
  }
  SUBCASE("monotone conditional") {
    Program p = corpus("mono.imp");
    accepted(seqProd(p, p, "x <= x'", "y <= y'", Domain{-3, 3}), Domain{-3, 3});
  }
}

TEST_CASE("Lockstep extraction") {
  SUBCASE("c0 against itself from the annotation file") {
    Program c0 = corpus("c0.imp");
    Automaton prod = buildProduct(c0, c0, ProductSpec::of(ProductKind::LockstepControl));
    auto loaded = testing::loadAnnotation(prod, "c0c0_lock.ann", true);
    auto x = extractLockstep(c0, c0, loaded.an, Domain{0, 5});
    accepted(x, Domain{0, 5});
    CHECK(countRule(x.derivation, Rule::DWh) == 1);
    CHECK_FALSE(anyUnary(x.derivation));
  }
  SUBCASE("single assignment") {
    Program p = parseProgram("x := x + 1");
    auto x = lockstep(p, p, "x < x'", "x < x'", Domain{-3, 3});
    accepted(x, Domain{-3, 3});
    CHECK(countRule(x.derivation, Rule::DAss) == 1);
    CHECK_FALSE(anyUnary(x.derivation));
  }
  SUBCASE("conditional") {
    Program p = corpus("cif.imp");
    auto x = lockstep(p, p, "agree(x, x)", "agree(x, x)", Domain{-3, 3});
    accepted(x, Domain{-3, 3});
    CHECK(countRule(x.derivation, Rule::DIf) == 1);
    CHECK_FALSE(anyUnary(x.derivation));
  }
  SUBCASE("summation loop") {
    Program p = corpus("sum.imp");
    auto x = lockstep(p, p, "agree(n, n)", "agree(s, s)", Domain{-1, 4});
    accepted(x, Domain{-1, 4});
    CHECK_FALSE(anyUnary(x.derivation));
  }
}

TEST_CASE("Lockstep extraction refuses c4|c5 at branch point 5") {
  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  Automaton prod = buildProduct(c4, c5, ProductSpec::of(ProductKind::LockstepControl));
  Annotation an = strongest(prod, rel("agree(x, x) && left(x > 3)"), rel("true"), Domain{4, 8});
  try {
    extractLockstep(c4, c5, an, Domain{4, 8});
    FAIL("expected a refusal");
  } catch (const ExtractionRefused& e) {
    CHECK(e.hypothesis() == "test agreement at 5");
  }
}

TEST_CASE("Lockstep extraction with a sameExcept hole") {
  SUBCASE("the conditional example") {
    auto x = lockstepSeq(corpus("hole_left.imp"), corpus("hole_right.imp"), 2, 5, "agree(x, x) && agree(y, y)",
                         "agree(x, x) && agree(y, y)", Domain{-4, 4});
    accepted(x, Domain{-4, 4});
    CHECK(countRule(x.derivation, Rule::SeqProd) == 1);
  }
  SUBCASE("single assignments in a trivial context") {
    Program c = parseProgram("fin 9\n1: x := 0; 2: y := x + 1; 3: z := y");
    Program d = parseProgram("fin 9\n1: x := 0; 2: y := 1 + x; 3: z := y");
    auto x = lockstepSeq(c, d, 2, 3, "true", "agree(z, z)", Domain{-2, 2});
    accepted(x, Domain{-2, 2});
    CHECK(countRule(x.derivation, Rule::SeqProd) == 1);
  }
  SUBCASE("whole program hole") {
    Program c = parseProgram("fin 9\n1: x := x + 1; 2: x := x + 1");
    Program d = parseProgram("fin 9\n1: x := x + 2");
    auto x = lockstepSeq(c, d, 1, 9, "agree(x, x)", "agree(x, x)", Domain{-2, 2});
    accepted(x, Domain{-2, 2});
    CHECK(countRule(x.derivation, Rule::SeqProd) == 1);
  }
}

TEST_CASE("conditionally aligned loop extraction") {
  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  auto spec = testing::caLoopSpec(4);
  Automaton prod = buildProduct(c4, c5, spec);
  auto loaded = testing::loadAnnotation(prod, "c4c5_caloop.ann", true);

  SUBCASE("the c4|c5 table") {
    auto x = extractCaWhile(c4, c5, 4, spec.lambda, spec.rho, loaded.an, Domain{-8, 8});
    accepted(x, Domain{4, 8});
    CHECK(countRule(x.derivation, Rule::CaWhile) == 1);
    CHECK(x.derivation.conclusion == Judgment::rel(c4.body, c5.body, rel("agree(x, x) && left(x > 3)"), rel("z > z'")));
  }
  SUBCASE("an unreachable point annotated with true") {
    std::map<Point, Formula> at(loaded.an.entries().begin(), loaded.an.entries().end());
    at.insert_or_assign(Point::pair(6, 8, Tag::Lck), rel("true"));
    Annotation an(prod, loaded.an.pre(), loaded.an.post(), at, true);
    auto x = extractCaWhile(c4, c5, 4, spec.lambda, spec.rho, an, Domain{-8, 8});
    accepted(x, Domain{4, 8});
  }
  SUBCASE("false guards behave as dWh") {
    Program c0 = corpus("c0.imp");
    ProductSpec s = ProductSpec::of(ProductKind::CaLoop);
    s.beg = 3;
    Automaton p = buildProduct(c0, c0, s);
    Annotation an = strongest(p, rel("agree(x, x)"), rel("agree(z, z)"), Domain{0, 4});
    auto x = extractCaWhile(c0, c0, 3, Formula::falsity(), Formula::falsity(), an, Domain{0, 4});
    accepted(x, Domain{0, 4});
    CHECK(countRule(x.derivation, Rule::CaWhile) == 1);
    CHECK_FALSE(anyUnary(x.derivation));
  }
  SUBCASE("summation loop with false guards") {
    Program p = corpus("sum.imp");
    ProductSpec s = ProductSpec::of(ProductKind::CaLoop);
    s.beg = 3;
    Automaton prodSum = buildProduct(p, p, s);
    Annotation an = strongest(prodSum, rel("agree(n, n)"), rel("agree(s, s)"), Domain{-1, 3});
    accepted(extractCaWhile(p, p, 3, Formula::falsity(), Formula::falsity(), an, Domain{-1, 3}), Domain{-1, 3});
  }
}

TEST_CASE("theorem names") {
  for (Theorem t : {Theorem::Floyd, Theorem::SeqProd, Theorem::Lockstep, Theorem::LockstepSeq, Theorem::CaWhile})
    CHECK(parseTheorem(theoremName(t)) == t);
  CHECK_THROWS(parseTheorem("hoare"));
}
