#include <doctest.h>

#include "support.hpp"

using namespace alignv;
using testing::corpus;
using testing::rel;

namespace {

std::set<std::tuple<Point, Point, std::string, std::string>> signature(const Automaton& a) {
  std::set<std::tuple<Point, Point, std::string, std::string>> out;
  for (const auto& t : a.transitions()) {
    std::string ups;
    for (const auto& u : t.updates) ups += toString(u.var) + ":=" + toString(u.value) + ";";
    out.emplace(t.from, t.to, toString(normalize(t.guard)), ups);
  }
  return out;
}

std::vector<AutState> sampleStates(const Automaton& prod, Value lo, Value hi) {
  std::vector<AutState> out;
  for (const auto& c : prod.controls())
    for (Value v = lo; v <= hi; ++v)
      for (Value w = lo; w <= hi; ++w) {
        Store s, t;
        for (const auto& x : prod.footprint()) (x.side == Side::Right ? t : s).set(x.name, x.side == Side::Right ? w : v);
        out.push_back(AutState{c, s, t});
      }
  return out;
}

const std::vector<std::string> kSimpleKinds = {"seq", "elck", "olck", "lckctl", "ilv", "lo", "ro", "dov"};

}  // namespace

TEST_CASE("sequential product CFG of c0 with itself") {
  Program c0 = corpus("c0.imp");
  Automaton a = autOf(c0);
  Automaton prod = buildProduct(a, a, ProductSpec::of(ProductKind::Sequential));
  Cfg unary = cfgOf(a);
  CHECK(prod.init() == Point::pair(1, 1));
  CHECK(prod.fin() == Point::pair(6, 6));
  for (const auto& [from, to] : cfgOf(prod).edges) {
    const bool leftEdge = from.right == 1 && to.right == 1 && unary.hasEdge(Point::unary(from.left), Point::unary(to.left));
    const bool rightEdge = from.left == 6 && to.left == 6 && unary.hasEdge(Point::unary(from.right), Point::unary(to.right));
    CHECK((leftEdge || rightEdge));
  }
  CHECK(cfgOf(prod).edges.size() == 2 * unary.edges.size());
}

TEST_CASE("every product transition is a step of one side or both") {
  Program p = corpus("cif.imp"), q = corpus("cif.imp");
  Automaton a = autOf(p), b = autOf(q);
  for (const auto& k : kSimpleKinds) {
    CAPTURE(k);
    Automaton prod = buildProduct(a, b, parseProductKind(k));
    for (const auto& s : sampleStates(prod, -1, 1)) CHECK(projectsCorrectly(prod, a, b, s));
  }
}

TEST_CASE("program-level products project correctly") {
  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  Automaton a = autOf(c4), b = autOf(c5);
  Automaton ca = buildProduct(c4, c5, testing::caLoopSpec(4));
  for (const auto& s : sampleStates(ca, 0, 1)) CHECK(projectsCorrectly(ca, a, b, s));
  Program l = corpus("hole_left.imp"), r = corpus("hole_right.imp");
  auto se = ProductSpec::of(ProductKind::SameExcept);
  se.beg = 2;
  se.end = 5;
  Automaton sp = buildProduct(l, r, se);
  for (const auto& s : sampleStates(sp, -1, 1)) CHECK(projectsCorrectly(sp, autOf(l), autOf(r), s));
}

TEST_CASE("ctrl-conditioned with diagonal joint steps is lockstep-control") {
  for (const char* name : {"c0.imp", "c4.imp", "cif.imp", "sum.imp"}) {
    CAPTURE(name);
    Program p = corpus(name);
    Automaton a = autOf(p);
    auto cc = ProductSpec::of(ProductKind::CtrlConditioned);
    for (const auto& pt : a.controls()) cc.joint.insert({pt.left, pt.left});
    Automaton x = buildProduct(a, a, cc);
    Automaton y = buildProduct(p, p, ProductSpec::of(ProductKind::LockstepControl));
    CHECK(signature(x) == signature(y));
  }
}

TEST_CASE("ctrl-conditioned subsumes the other simple kinds") {
  Program p = corpus("cif.imp");
  Automaton a = autOf(p);
  std::set<std::pair<Label, Label>> all, finRight, finLeft;
  for (const auto& n : a.controls())
    for (const auto& m : a.controls()) {
      all.insert({n.left, m.left});
      if (m == a.fin()) finRight.insert({n.left, m.left});
      if (n == a.fin()) finLeft.insert({n.left, m.left});
    }
  auto cc = ProductSpec::of(ProductKind::CtrlConditioned);
  cc.joint = all;
  CHECK(signature(buildProduct(a, a, cc)) == signature(buildProduct(a, a, ProductSpec::of(ProductKind::OnlyLockstep))));
  cc = ProductSpec::of(ProductKind::CtrlConditioned);
  cc.left = all;
  cc.right = all;
  CHECK(signature(buildProduct(a, a, cc)) == signature(buildProduct(a, a, ProductSpec::of(ProductKind::Interleaved))));
  cc = ProductSpec::of(ProductKind::CtrlConditioned);
  for (const auto& [n, m] : all)
    if (m == 1) cc.left.insert({n, m});
  cc.right = finLeft;
  CHECK(signature(buildProduct(a, a, cc)) == signature(buildProduct(a, a, ProductSpec::of(ProductKind::Sequential))));
}

TEST_CASE("dovetail alternates until one side terminates") {
  Program p = corpus("c0.imp");
  Automaton a = autOf(p);
  Automaton dov = buildProduct(a, a, ProductSpec::of(ProductKind::Dovetail));
  for (const auto& t : dov.transitions()) {
    if (t.from.left == a.fin().left || t.from.right == a.fin().left) continue;
    CHECK(t.from.tag != t.to.tag);
  }
  auto traces = autTraces(dov, AutState{dov.init(), Store{{"x", 2}}, Store{{"x", 3}}}, 100);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].back().ctrl == dov.fin());
}

TEST_CASE("projections of a sequential trace") {
  Program c0 = corpus("c0.imp");
  Automaton a = autOf(c0);
  Automaton prod = buildProduct(a, a, ProductSpec::of(ProductKind::Sequential));
  auto ts = autTraces(prod, AutState{prod.init(), Store{{"x", 3}}, Store{{"x", 2}}}, 200);
  REQUIRE(ts.size() == 1);
  auto left = autTraces(a, AutState{a.init(), Store{{"x", 3}}, {}}, 200);
  auto right = autTraces(a, AutState{a.init(), Store{{"x", 2}}, {}}, 200);
  CHECK(projectLeft(ts[0]) == left[0]);
  CHECK(projectRight(ts[0]) == right[0]);
  // Halfway through, the left run has finished and its state is frozen.
  const auto& mid = ts[0][left[0].size()];
  CHECK(mid.ctrl.left == a.fin().left);
  CHECK(mid.left == left[0].back().left);
}

TEST_CASE("lockstep traces project to equal lengths") {
  Program c0 = corpus("c0.imp");
  Automaton a = autOf(c0);
  Automaton prod = buildProduct(c0, c0, ProductSpec::of(ProductKind::LockstepControl));
  auto ts = autTraces(prod, AutState{prod.init(), Store{{"x", 3}}, Store{{"x", 3}}}, 200);
  REQUIRE(ts.size() == 1);
  CHECK(projectLeft(ts[0]).size() == ts[0].size());
  CHECK(projectRight(ts[0]).size() == ts[0].size());
}

TEST_CASE("adequacy") {
  Program l2 = corpus("loop2.imp"), l3 = corpus("loop3.imp");
  Automaton a = autOf(l2), b = autOf(l3);
  auto olck = checkAdequacy(buildProduct(a, b, ProductSpec::of(ProductKind::OnlyLockstep)), a, b, rel("true"),
                            Domain{-2, 2}, 64);
  REQUIRE(olck.verdict == Verdict::Fails);
  REQUIRE(olck.left);
  REQUIRE(olck.right);
  CHECK(olck.left->size() != olck.right->size());
  for (const char* k : {"seq", "elck", "ilv", "dov"}) {
    CAPTURE(k);
    CHECK(checkAdequacy(buildProduct(a, b, parseProductKind(k)), a, b, rel("true"), Domain{-2, 2}, 64).verdict ==
          Verdict::Holds);
  }
  Program c0 = corpus("c0.imp");
  Automaton c = autOf(c0);
  CHECK(checkAdequacy(buildProduct(c, c, ProductSpec::of(ProductKind::Sequential)), c, c, rel("true"), Domain{0, 4},
                      64)
            .verdict == Verdict::Holds);
  CHECK(checkAdequacy(buildProduct(c, c, ProductSpec::of(ProductKind::EagerLockstep)), c, c, rel("true"), Domain{0, 4},
                      64)
            .verdict == Verdict::Holds);
}

TEST_CASE("conditionally aligned loop product for c0|c0") {
  Program c0 = corpus("c0.imp");
  auto s = ProductSpec::of(ProductKind::CaLoop);
  s.beg = 3;
  s.lambda = rel("left(z > 5)");
  s.rho = rel("right(z' > 7)");
  Automaton prod = buildProduct(c0, c0, s);
  auto L = [](int n, int m) { return Point::pair(n, m, Tag::Lck); };
  auto Lo = [](int n, int m) { return Point::pair(n, m, Tag::Lo); };
  auto Ro = [](int n, int m) { return Point::pair(n, m, Tag::Ro); };
  std::set<std::pair<Point, Point>> expected = {
      {L(1, 1), L(2, 2)},   {L(2, 2), L(3, 3)},   {L(3, 3), L(4, 4)},   {L(4, 4), L(5, 5)},
      {L(5, 5), L(3, 3)},   {L(3, 3), Lo(4, 3)},  {Lo(4, 3), Lo(5, 3)}, {Lo(5, 3), L(3, 3)},
      {L(3, 3), Ro(3, 4)},  {Ro(3, 4), Ro(3, 5)}, {Ro(3, 5), L(3, 3)},  {L(3, 3), L(6, 6)},
  };
  CHECK(cfgOf(prod).edges == expected);
  for (const auto& t : prod.transitions()) {
    if (t.from == L(3, 3) && t.to == Lo(4, 3)) {
      Formula g(t.guard);
      Formula want = rel("y != 0 && left(z > 5)");
      CHECK(impliesBounded(g, want, Domain{-3, 3}).holds);
      CHECK(impliesBounded(want, g, Domain{-3, 3}).holds);
    }
    if (t.from == L(3, 3) && t.to == L(4, 4)) {
      Formula g(t.guard);
      Formula want = rel("y != 0 && y' != 0 && !(z > 5) && !(z' > 7)");
      CHECK(impliesBounded(g, want, Domain{-3, 3}).holds);
      CHECK(impliesBounded(want, g, Domain{-3, 3}).holds);
    }
  }
}

TEST_CASE("product preconditions name the failing clause") {
  Program c0 = corpus("c0.imp"), c4 = corpus("c4.imp");
  CHECK_THROWS_AS(buildProduct(c0, c4, ProductSpec::of(ProductKind::LockstepControl)), DomainError);
  auto s = testing::caLoopSpec(2);
  CHECK_THROWS_AS(buildProduct(c4, c4, s), DomainError);

  SameExceptInfo ok = sameExcept(corpus("hole_left.imp"), corpus("hole_right.imp"), 2, 5);
  CHECK(ok.ok);
  REQUIRE(ok.b);
  CHECK(toString(*ok.b) == "2: y := y; 3: x := 0");
  CHECK(toString(*ok.b2) == "2: x := 0");

  SameExceptInfo bad = sameExcept(corpus("c4.imp"), corpus("c0.imp"), 1, 0);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.clause.empty());
  SameExceptInfo ctx = sameExcept(parseProgram("fin 3\n1: x := 1; 2: y := 2"), parseProgram("fin 3\n1: x := 1; 2: skip"), 1, 2);
  CHECK_FALSE(ctx.ok);
  CHECK(ctx.clause == "sameCtl(ĉ[skip], ĉ'[skip])");
}

TEST_CASE("relational oracle examples") {
  auto check = [](const char* l, const char* r, const char* pre, const char* post, Domain d) {
    Automaton a = autOf(corpus(l)), b = autOf(corpus(r));
    return relSatisfiesBounded(a, b, rel(pre), rel(post), d, 1000);
  };
  auto inc = check("choice_inc.imp", "choice_inc.imp", "agree(x, x)", "agree(x, x)", Domain{-8, 8});
  CHECK(inc.verdict == Verdict::Fails);
  REQUIRE(inc.final);
  CHECK(inc.final->left.get("x") != inc.final->right.get("x"));
  CHECK(check("choice_y.imp", "choice_y.imp", "agree(x, x)", "agree(x, x)", Domain{-8, 8}).verdict == Verdict::Holds);
  CHECK(check("mono.imp", "mono.imp", "x <= x'", "y <= y'", Domain{-4, 4}).verdict == Verdict::Holds);
  CHECK(check("c0.imp", "c0.imp", "agree(x, x)", "agree(z, z)", Domain{-2, 2}).verdict == Verdict::Inconclusive);
}
