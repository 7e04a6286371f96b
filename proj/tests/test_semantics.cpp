#include <doctest.h>

#include "alignv/semantics.hpp"
#include "support.hpp"

using namespace alignv;
using testing::corpus;

namespace {

Value factorial(Value n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("expression evaluation") {
  Store s{{"y", 3}, {"w", 4}, {"x", 7}};
  Env env{&s, nullptr};
  CHECK(evaluate(parseExpr("y != 0"), env) == 1);
  CHECK(evaluate(parseExpr("w % 2 = 0"), env) == 1);
  CHECK(evaluate(parseExpr("x % 0"), env) == 0);
  CHECK(evaluate(parseExpr("-7 % 2"), env) == -1);
  CHECK(evaluate(parseExpr("not (x < 3) and y"), env) == 1);
  CHECK(evaluate(parseExpr("u + 1"), env) == 1);
}

TEST_CASE("while with a false test steps to skip^-n") {
  auto w = parseCommand("3: while y != 0 do 4: y := y - 1 od");
  auto next = step({w, Store{{"y", 0}}});
  REQUIRE(next.size() == 1);
  CHECK(*next[0].cmd == *Command::skip(-3));
  CHECK(next[0].store == Store{{"y", 0}});
}

TEST_CASE("assignment updates and leaves skip^-n") {
  auto next = step({parseCommand("2: x := x + 1"), Store{{"x", 3}}});
  REQUIRE(next.size() == 1);
  CHECK(*next[0].cmd == *Command::skip(-2));
  CHECK(next[0].store.get("x") == 4);
}

TEST_CASE("choice has two successors and skip none") {
  Configuration k{parseCommand("1: choice 2: skip or 3: skip end"), Store{}};
  CHECK(step(k).size() == 2);
  CHECK(step({Command::skip(5), Store{}}).empty());
}

TEST_CASE("sequence consumes a leading skip") {
  auto next = step({parseCommand("1: skip; 2: x := 1"), Store{}});
  REQUIRE(next.size() == 1);
  CHECK(*next[0].cmd == *Command::assign(2, "x", Expr::lit(1)));
}

TEST_CASE("run c0 computes the factorial") {
  Program c0 = corpus("c0.imp");
  for (Value x = 0; x <= 6; ++x) {
    auto out = run(c0, Store{{"x", x}}, 1000);
    REQUIRE(out.terminated());
    REQUIRE(out.terminal.size() == 1);
    CHECK(out.terminal[0].get("z") == factorial(x));
    CHECK(out.terminal[0].get("y") == 0);
  }
}

TEST_CASE("run of a negative input exhausts the budget") {
  auto out = run(corpus("c0.imp"), Store{{"x", -1}}, 200);
  CHECK(out.diverged);
  CHECK(out.terminal.empty());
}

TEST_CASE("run skip leaves the store unchanged") {
  Store s{{"a", 5}};
  auto out = run(parseProgram("skip"), s, 10);
  REQUIRE(out.terminal.size() == 1);
  CHECK(out.terminal[0] == s);
}

TEST_CASE("run c4 from x=5") {
  // At exit y = 4, so x! * 4! = z * 4! gives z = 24 * 5!/4!.
  auto out = run(corpus("c4.imp"), Store{{"x", 5}}, 10000);
  REQUIRE(out.terminal.size() == 1);
  CHECK(out.terminal[0].get("z") == 120);
}

TEST_CASE("run explores every choice") {
  auto out = run(corpus("choice_inc.imp"), Store{{"x", 0}}, 10);
  REQUIRE(out.terminal.size() == 2);
  CHECK(out.terminal[0].get("x") == 1);
  CHECK(out.terminal[1].get("x") == 2);
}

TEST_CASE("progress, determinacy and negative labels on reachable configurations") {
  for (const auto& name : testing::corpusPrograms()) {
    CAPTURE(name);
    Program p = corpus(name);
    const bool det = choiceFree(*p.body);
    for (Value x = -2; x <= 2; ++x) {
      Store s0;
      for (const auto& v : variables(*p.body)) s0.set(v, x);
      for (const auto& t : traces({p.full(), s0}, 200)) {
        for (const auto& k : t) {
          auto next = step(k);
          const bool lone = k.cmd->kind() == Command::Kind::Skip;
          CHECK(next.empty() == lone);
          if (det) CHECK(next.size() <= 1);
          std::vector<CommandPtr> stack{k.cmd};
          while (!stack.empty()) {
            auto c = stack.back();
            stack.pop_back();
            if (c->kind() != Command::Kind::Seq && c->label() < 0) CHECK(c->kind() == Command::Kind::Skip);
            if (c->kind() == Command::Kind::Seq) {
              stack.push_back(c->first());
              stack.push_back(c->second());
            }
          }
        }
      }
    }
  }
}
