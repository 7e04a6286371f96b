#include <random>

#include <doctest.h>

#include "support.hpp"

using namespace alignv;
using testing::rel;
using testing::una;

TEST_CASE("relational satisfaction") {
  CHECK(holdsR(rel("agree(x, x)"), Store{{"x", 3}}, Store{{"x", 3}}));
  CHECK(holdsR(rel("left(y != 0)"), Store{{"y", 2}}, Store{{"y", 0}}));
  CHECK(holdsR(rel("bagree(y != 0, y' != 0)"), Store{{"y", 5}}, Store{{"y", -1}}));
  CHECK_FALSE(holdsR(rel("bagree(y != 0, y' != 0)"), Store{{"y", 5}}, Store{{"y", 0}}));
  CHECK(holdsR(rel("x = x' && right(x > 2)"), Store{{"x", 3}}, Store{{"x", 3}}));
  CHECK(holdsU(una("x' = x + 1"), Store{{"x", 1}, {"x'", 2}}));
}

TEST_CASE("arity is checked") {
  CHECK(rel("agree(x, x)").arity() == Arity::Relational);
  CHECK(una("x > 0").arity() == Arity::Unary);
  CHECK(rel("true").arity() == Arity::Neutral);
  CHECK_THROWS_AS(Formula(mkAnd(Expr::var("x"), Expr::var("y", Side::Left))), DomainError);
}

TEST_CASE("substR follows its semantic definition") {
  Formula r = rel("agree(x, x)");
  Formula s = substR(r, SideAssign{"x", parseExpr("x + 1")}, SideAssign{"x", parseExpr("x + 2")});
  CHECK(holdsR(s, Store{{"x", 0}}, Store{{"x", -1}}));
  CHECK_FALSE(holdsR(s, Store{{"x", 0}}, Store{{"x", 0}}));

  Formula one = substR(rel("x = x' && y' > 0"), SideAssign{"x", parseExpr("7")}, std::nullopt);
  CHECK(sameFormula(one, rel("7 = x' && y' > 0")));

  CHECK(impliesBounded(substR(rel("left(x > 0)"), SideAssign{"x", Expr::lit(0)}, std::nullopt), rel("false"),
                       Domain{-2, 2})
            .holds);
}

TEST_CASE("encodePlus") {
  CHECK(sameFormula(encodePlus(rel("agree(x, x)")), una("x = x'")));
  CHECK(sameFormula(encodePlus(rel("left(x + y > 0)")), una("x + y > 0")));
  CHECK(sameFormula(decodePlus(encodePlus(rel("x < y' && z = 2"))), rel("x < y' && z = 2")));
  Store s{{"x", 1}}, t{{"x", 4}};
  CHECK(mergePlus(s, t) == Store{{"x", 1}, {"x'", 4}});
}

TEST_CASE("encodePlus is faithful on bounded stores") {
  Formula r = rel("x + y' > z && (x = x' || right(z % 2 = 0))");
  Formula u = encodePlus(r);
  for (Value x = -2; x <= 2; ++x)
    for (Value y = -2; y <= 2; ++y)
      for (Value z = -2; z <= 2; ++z)
        for (Value x2 = -2; x2 <= 2; ++x2) {
          Store s{{"x", x}, {"z", z}}, t{{"x", x2}, {"y", y}, {"z", z + 1}};
          CHECK(holdsR(r, s, t) == holdsU(u, mergePlus(s, t)));
        }
}

TEST_CASE("substitution commutes with the product encoding on one instance") {
  // (R[x|x' := e|e'])+ equals R+ with x and x' replaced by e and dot(e').
  Formula r = rel("agree(x, y)");
  Expr e = parseExpr("x + 1"), e2 = parseExpr("y * 2");
  Formula lhs = encodePlus(substR(r, SideAssign{"x", e}, SideAssign{"x", e2}));
  Formula rhs(substitute(encodePlus(r).expr(),
                         {{VarRef{"x"}, e}, {VarRef{dottedName("x")}, dotted(e2)}}));
  CHECK(impliesBounded(lhs, rhs, Domain{-2, 2}).holds);
  CHECK(impliesBounded(rhs, lhs, Domain{-2, 2}).holds);
}

TEST_CASE("impliesBounded with witnesses") {
  Formula f = rel("agree(x, x) && left(x > 3)");
  Formula g = substR(rel("bagree(y != 4, y' != 4)"), SideAssign{"y", parseExpr("x")}, SideAssign{"y", parseExpr("x")});
  CHECK(impliesBounded(f, g, Domain{-8, 8}).holds);

  auto res = impliesBounded(rel("left(x > 0)"), rel("agree(x, x)"), Domain{-2, 2});
  REQUIRE_FALSE(res.holds);
  REQUIRE(res.witness);
  CHECK(res.witness->left.get("x") > 0);
  CHECK(res.witness->left.get("x") != res.witness->right.get("x"));

  Formula p = una("x * x > y");
  CHECK(impliesBounded(p, p, Domain{-3, 3}).holds);
  CHECK(validBounded(una("x % 2 = 0 || x % 2 != 0"), Domain{-5, 5}));
}

TEST_CASE("extensional sets") {
  Formula s = una("{y, z : (4, 1), (3, 4)}");
  CHECK(holdsU(s, Store{{"y", 4}, {"z", 1}}));
  CHECK_FALSE(holdsU(s, Store{{"y", 4}, {"z", 4}}));
  CHECK(impliesBounded(s, una("z = 1 || z = 4"), Domain{-1, 1}).holds);
  CHECK(sameFormula(s, una("{z, y : (4, 3), (1, 4)}")));
  Formula shifted = substU(s, "y", parseExpr("y - 1"));
  CHECK(holdsU(shifted, Store{{"y", 5}, {"z", 1}}));
}

TEST_CASE("normalization identifies reordered formulas") {
  CHECK(sameFormula(una("a > 1 && b < 2"), una("2 > b && 1 < a")));
  CHECK(sameFormula(una("!(a = 1)"), una("a != 1")));
  CHECK(sameFormula(una("a -> b > 0"), una("!a || b > 0")));
  CHECK_FALSE(sameFormula(una("a > 1"), una("a >= 1")));
}

TEST_CASE("round trip through toString") {
  for (const char* text : {"x = x' && x > 3", "bagree(y != 4, y' != 4) || left(w % 2 != 0)", "!(z > z') -> true"}) {
    Formula f = rel(text);
    CHECK(sameFormula(rel(toString(f)), f));
  }
}
