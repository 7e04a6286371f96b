#include "alignv/sexpr.hpp"

#include <cctype>

namespace alignv {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  SExpr read() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const int line = line_;
    const char c = s_[pos_];
    if (c == '(') {
      advance();
      SExpr out = SExpr::list({});
      out.line = line;
      for (;;) {
        skip();
        if (pos_ >= s_.size()) fail("unclosed '('");
        if (s_[pos_] == ')') {
          advance();
          return out;
        }
        out.items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') {
      advance();
      std::string text;
      for (;;) {
        if (pos_ >= s_.size()) fail("unterminated string");
        char ch = s_[pos_];
        advance();
        if (ch == '"') break;
        if (ch == '\\') {
          if (pos_ >= s_.size()) fail("unterminated string");
          ch = s_[pos_];
          advance();
          if (ch == 'n') ch = '\n';
        }
        text.push_back(ch);
      }
      SExpr out = SExpr::str(std::move(text));
      out.line = line;
      return out;
    }
    std::string text;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' &&
           s_[pos_] != ')' && s_[pos_] != '"' && s_[pos_] != ';') {
      text.push_back(s_[pos_]);
      advance();
    }
    SExpr out = SExpr::atom(std::move(text));
    out.line = line;
    return out;
  }

  void expectEnd() {
    skip();
    if (pos_ < s_.size()) fail("trailing input after s-expression");
  }

 private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        advance();
      } else if (s_[pos_] == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

bool breaks(const SExpr& e) {
  return e.kind == SExpr::Kind::List && !e.items.empty() &&
         (e.items.front().isAtom("rule") || e.items.front().isAtom("premises"));
}

}  // namespace

SExpr parseSExpr(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  r.expectEnd();
  return e;
}

std::string toString(const SExpr& e, int indent) {
  switch (e.kind) {
    case SExpr::Kind::Atom: return e.text;
    case SExpr::Kind::String: return quote(e.text);
    case SExpr::Kind::List: break;
  }
  std::string out = "(";
  const bool multi = breaks(e);
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i > 0) {
      if (multi && (i > 1 || e.items.front().isAtom("premises"))) {
        out += "\n" + std::string(static_cast<std::size_t>(indent) + 2, ' ');
      } else {
        out += " ";
      }
    }
    out += toString(e.items[i], indent + 2);
  }
  return out + ")";
}

namespace {

[[noreturn]] void bad(const SExpr& at, const std::string& msg) { throw ParseError(msg, at.line, 1); }

const SExpr* field(const SExpr& node, std::string_view head) {
  for (std::size_t i = 2; i < node.items.size(); ++i) {
    const auto& it = node.items[i];
    if (it.kind == SExpr::Kind::List && !it.items.empty() && it.items.front().isAtom(head)) return &it;
  }
  return nullptr;
}

const std::string& stringAt(const SExpr& list, std::size_t i, const char* what) {
  if (i >= list.items.size() || list.items[i].kind != SExpr::Kind::String) bad(list, std::string("expected ") + what);
  return list.items[i].text;
}

Formula formulaOf(const SExpr& at, const std::string& text, FormulaMode mode) {
  try {
    return parseFormula(text, mode);
  } catch (const ParseError& e) {
    bad(at, "formula \"" + text + "\": " + e.what());
  }
}

CommandPtr commandOf(const SExpr& at, const std::string& text) {
  try {
    return parseCommand(text, true);
  } catch (const ParseError& e) {
    bad(at, "command \"" + text + "\": " + e.what());
  }
}

Value integer(const SExpr& at) {
  if (at.kind != SExpr::Kind::Atom) bad(at, "expected an integer");
  try {
    std::size_t used = 0;
    long long v = std::stoll(at.text, &used);
    if (used != at.text.size()) bad(at, "expected an integer, got " + at.text);
    return v;
  } catch (const std::logic_error&) {
    bad(at, "expected an integer, got " + at.text);
  }
}

}  // namespace

SExpr toSExpr(const Derivation& d) {
  std::vector<SExpr> xs{SExpr::atom("rule"), SExpr::atom(ruleName(d.rule))};
  if (d.domain)
    xs.push_back(SExpr::list(
        {SExpr::atom("domain"), SExpr::atom(std::to_string(d.domain->lo)), SExpr::atom(std::to_string(d.domain->hi))}));
  const Judgment& j = d.conclusion;
  if (j.relational)
    xs.push_back(SExpr::list({SExpr::atom("concl"),
                              SExpr::list({SExpr::atom("rel"), SExpr::str(toString(*j.left)), SExpr::str(toString(*j.right)),
                                           SExpr::str(toString(j.pre)), SExpr::str(toString(j.post))})}));
  else
    xs.push_back(SExpr::list({SExpr::atom("concl"), SExpr::list({SExpr::atom("unary"), SExpr::str(toString(*j.left)),
                                                                 SExpr::str(toString(j.pre)), SExpr::str(toString(j.post))})}));
  if (!d.sides.empty()) {
    std::vector<SExpr> ss{SExpr::atom("side")};
    for (const auto& s : d.sides) ss.push_back(SExpr::list({SExpr::str(toString(s.lhs)), SExpr::str(toString(s.rhs))}));
    xs.push_back(SExpr::list(std::move(ss)));
  }
  if (d.lambda || d.rho)
    xs.push_back(SExpr::list({SExpr::atom("params"), SExpr::str(d.lambda ? toString(*d.lambda) : "false"),
                              SExpr::str(d.rho ? toString(*d.rho) : "false")}));
  if (!d.premises.empty()) {
    std::vector<SExpr> ps{SExpr::atom("premises")};
    for (const auto& p : d.premises) ps.push_back(toSExpr(p));
    xs.push_back(SExpr::list(std::move(ps)));
  }
  return SExpr::list(std::move(xs));
}

Derivation derivationFromSExpr(const SExpr& e) {
  if (e.kind != SExpr::Kind::List || e.items.size() < 2 || !e.items[0].isAtom("rule") ||
      e.items[1].kind != SExpr::Kind::Atom)
    bad(e, "expected (rule NAME ...)");
  Derivation d;
  auto rule = ruleFromName(e.items[1].text);
  if (!rule) bad(e, "unknown rule " + e.items[1].text);
  d.rule = *rule;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const auto& it = e.items[i];
    static const char* known[] = {"domain", "concl", "side", "params", "premises"};
    bool ok = it.kind == SExpr::Kind::List && !it.items.empty();
    if (ok) {
      ok = false;
      for (const char* k : known) ok = ok || it.items.front().isAtom(k);
    }
    if (!ok) bad(it, "unexpected field in rule " + e.items[1].text);
  }
  if (const SExpr* dom = field(e, "domain")) {
    if (dom->items.size() != 3) bad(*dom, "expected (domain LO HI)");
    d.domain = Domain{integer(dom->items[1]), integer(dom->items[2])};
  }
  const SExpr* concl = field(e, "concl");
  if (!concl || concl->items.size() != 2 || concl->items[1].kind != SExpr::Kind::List ||
      concl->items[1].items.empty())
    bad(e, "missing (concl ...)");
  const SExpr& j = concl->items[1];
  if (j.items[0].isAtom("rel")) {
    if (j.items.size() != 5) bad(j, "expected (rel \"c\" \"c'\" \"R\" \"S\")");
    d.conclusion = Judgment::rel(commandOf(j, stringAt(j, 1, "left command")), commandOf(j, stringAt(j, 2, "right command")),
                                 formulaOf(j, stringAt(j, 3, "precondition"), FormulaMode::Relational),
                                 formulaOf(j, stringAt(j, 4, "postcondition"), FormulaMode::Relational));
  } else if (j.items[0].isAtom("unary")) {
    if (j.items.size() != 4) bad(j, "expected (unary \"c\" \"P\" \"Q\")");
    d.conclusion = Judgment::unary(commandOf(j, stringAt(j, 1, "command")),
                                   formulaOf(j, stringAt(j, 2, "precondition"), FormulaMode::Unary),
                                   formulaOf(j, stringAt(j, 3, "postcondition"), FormulaMode::Unary));
  } else {
    bad(j, "expected rel or unary judgment");
  }
  const FormulaMode mode = d.conclusion.relational ? FormulaMode::Relational : FormulaMode::Unary;
  if (const SExpr* side = field(e, "side")) {
    for (std::size_t i = 1; i < side->items.size(); ++i) {
      const auto& s = side->items[i];
      if (s.kind != SExpr::Kind::List || s.items.size() != 2) bad(s, "expected (\"lhs\" \"rhs\")");
      d.sides.push_back({formulaOf(s, stringAt(s, 0, "antecedent"), mode), formulaOf(s, stringAt(s, 1, "consequent"), mode)});
    }
  }
  if (const SExpr* params = field(e, "params")) {
    if (params->items.size() != 3) bad(*params, "expected (params \"L\" \"R\")");
    d.lambda = formulaOf(*params, stringAt(*params, 1, "left condition"), FormulaMode::Relational);
    d.rho = formulaOf(*params, stringAt(*params, 2, "right condition"), FormulaMode::Relational);
  }
  if (const SExpr* ps = field(e, "premises"))
    for (std::size_t i = 1; i < ps->items.size(); ++i) d.premises.push_back(derivationFromSExpr(ps->items[i]));
  return d;
}

std::string writeDerivation(const Derivation& d) { return toString(toSExpr(d)) + "\n"; }

Derivation readDerivation(std::string_view text) { return derivationFromSExpr(parseSExpr(text)); }

}  // namespace alignv
