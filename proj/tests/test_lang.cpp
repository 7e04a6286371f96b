#include <doctest.h>

#include "support.hpp"

using namespace alignv;
using testing::corpus;

namespace {

const char* kC0 = R"(
y := x;
z := 1;
while y != 0 do
  z := z * y;
  y := y - 1
od
)";

const char* kIf = "if x > 0 then x := x - 1; y := x else skip fi";

void subterms(const CommandPtr& c, std::vector<CommandPtr>& out) {
  out.push_back(c);
  switch (c->kind()) {
    case Command::Kind::Seq:
    case Command::Kind::Choice:
    case Command::Kind::If:
      subterms(c->first(), out);
      subterms(c->second(), out);
      break;
    case Command::Kind::While: subterms(c->body(), out); break;
    default: break;
  }
}

}  // namespace

TEST_CASE("auto-labelling of c0 is preorder from 1") {
  Program p = parseProgram(kC0);
  CHECK(p.fin == 0);
  CHECK(labs(*p.body) == std::vector<Label>{1, 2, 3, 4, 5});
  CHECK(sub(1, p.body)->kind() == Command::Kind::Assign);
  CHECK(sub(1, p.body)->target() == "y");
  CHECK(sub(3, p.body)->kind() == Command::Kind::While);
  CHECK(sub(4, p.body)->target() == "z");
  CHECK(sub(5, p.body)->target() == "y");
  CHECK(ok(p));
}

TEST_CASE("c4 and c5 have nine labels") {
  for (const char* name : {"c4.imp", "c5.imp"}) {
    Program p = corpus(name);
    CHECK(labs(*p.body) == std::vector<Label>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(p.fin == 0);
    CHECK(sub(4, p.body)->kind() == Command::Kind::While);
    CHECK(sub(5, p.body)->kind() == Command::Kind::If);
    CHECK(sub(8, p.body)->kind() == Command::Kind::Skip);
  }
}

TEST_CASE("skip parses as skip^1 with fin 0") {
  Program p = parseProgram("skip");
  CHECK(p.body->kind() == Command::Kind::Skip);
  CHECK(p.body->label() == 1);
  CHECK(p.fin == 0);
}

TEST_CASE("explicit labels are honoured and gaps filled") {
  Program p = parseProgram("fin 9\n7: x := 1; y := 2; 3: skip");
  CHECK(labs(*p.body) == std::vector<Label>{1, 3, 7});
  CHECK(sub(7, p.body)->target() == "x");
  CHECK(sub(1, p.body)->target() == "y");
  CHECK(p.fin == 9);
  Program q = parseProgram("fin 1\nx := 1; y := 2");
  CHECK(labs(*q.body) == std::vector<Label>{2, 3});
}

TEST_CASE("ok rejects duplicates and negative labels") {
  CHECK_FALSE(ok(*Command::seq(Command::skip(1), Command::skip(1))));
  CHECK_FALSE(ok(*Command::skip(-3)));
  CHECK(ok(*Command::seq(Command::skip(1), Command::skip(2))));
  CHECK_FALSE(ok(Program{Command::skip(1), 1}));
}

TEST_CASE("parse errors carry positions") {
  try {
    parseProgram("x := 1;\ny := ");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parseProgram("1: skip; 1: skip"), ParseError);
  CHECK_THROWS_AS(parseProgram("-2: skip"), ParseError);
  CHECK_THROWS_AS(parseProgram("fin 1\n1: skip"), ParseError);
  CHECK_THROWS_AS(parseProgram("while x do skip"), ParseError);
  CHECK_THROWS_AS(parseProgram("x' := 1"), ParseError);
}

TEST_CASE("comments and alternative connectives") {
  Program p = parseProgram("# header\nif x > 0 and y > 0 then skip else skip fi # tail\n");
  Program q = parseProgram("if x > 0 && y > 0 then skip else skip fi");
  CHECK(*p.body == *q.body);
}

TEST_CASE("sub, lab, labs on c0") {
  Program p = parseProgram(kC0);
  CommandPtr s2 = sub(2, p.body);
  CHECK(*s2 == *Command::assign(2, "z", Expr::lit(1)));
  CHECK(lab(*p.body) == 1);
  CHECK_THROWS_AS(sub(9, p.body), DomainError);
}

TEST_CASE("fsuc golden values") {
  Program c0 = parseProgram(kC0);
  CHECK(fsuc(3, *c0.body, 6) == 6);
  CHECK(fsuc(5, *c0.body, 6) == 3);
  CHECK(fsuc(1, *c0.body, 6) == 2);
  CHECK(fsuc(4, *c0.body, 6) == 5);
  Program c = parseProgram(kIf);
  CHECK(fsuc(2, *c.body, 5) == 3);
  CHECK(fsuc(1, *c.body, 5) == 5);
  CHECK(fsuc(3, *c.body, 5) == 5);
  CHECK(fsuc(4, *c.body, 5) == 5);
  CHECK_THROWS_AS(fsuc(7, *c.body, 5), DomainError);
  CHECK_THROWS_AS(fsuc(1, *c.body, 2), DomainError);
}

TEST_CASE("elab") {
  Program c0 = parseProgram(kC0);
  CHECK(elab(*sub(3, c0.body), *c0.body, 6) == 6);
  auto body = Command::seq(sub(4, c0.body), sub(5, c0.body));
  CHECK(elab(*body, *c0.body, 6) == 3);
  CHECK(elab(*body, *c0.body, 6) == fsuc(5, *c0.body, 6));
  CHECK(elab(*c0.body, *c0.body, 6) == 6);
  CHECK_THROWS_AS(elab(*Command::skip(1), *c0.body, 6), DomainError);
}

TEST_CASE("fsuc stays within labs and fin for the corpus") {
  for (const auto& name : testing::corpusPrograms()) {
    CAPTURE(name);
    Program p = corpus(name);
    auto ls = labs(*p.body);
    for (Label n : ls) {
      Label m = fsuc(n, *p.body, p.fin);
      CHECK((m == p.fin || std::find(ls.begin(), ls.end(), m) != ls.end()));
    }
  }
}

TEST_CASE("pretty printing round-trips") {
  for (const auto& name : testing::corpusPrograms()) {
    CAPTURE(name);
    Program p = corpus(name);
    Program q = parseProgram(prettyPrint(p));
    CHECK(*p.body == *q.body);
    CHECK(p.fin == q.fin);
    CHECK(*parseCommand(toString(*p.body)) == *p.body);
  }
}

TEST_CASE("every subterm is found again through its label") {
  for (const auto& name : testing::corpusPrograms()) {
    CAPTURE(name);
    Program p = corpus(name);
    std::vector<CommandPtr> all;
    subterms(p.body, all);
    for (const auto& b : all) {
      CHECK(hasLabel(*p.body, lab(*b)));
      CHECK(isSubterm(*b, *p.body));
      CommandPtr s = sub(lab(*b), p.body);
      if (b->kind() != Command::Kind::Seq) CHECK(*s == *b);
      else CHECK(lab(*s) == lab(*b));
    }
  }
}

TEST_CASE("sameCtl and the relaxed variant") {
  Program c4 = corpus("c4.imp"), c5 = corpus("c5.imp");
  CHECK(sameCtl(*c4.body, *c5.body));
  auto a = parseCommand("1: x := 1; 2: y := 2");
  auto b = parseCommand("1: x := 1; 2: skip");
  CHECK_FALSE(sameCtl(*a, *b));
  CHECK(sameCtl(*a, *b, true));
  CHECK(choiceFree(*c4.body));
  CHECK_FALSE(choiceFree(*corpus("choice_y.imp").body));
}

TEST_CASE("dotted copies and relabelling") {
  Program c0 = parseProgram(kC0);
  auto d = dotted(c0.body);
  CHECK(variables(*d) == std::set<std::string>{"x'", "y'", "z'"});
  CHECK(equalModuloLabels(*relabel(c0.body, 10), *c0.body));
  CHECK(labs(*relabel(c0.body, 10)) == std::vector<Label>{10, 11, 12, 13, 14});
}
