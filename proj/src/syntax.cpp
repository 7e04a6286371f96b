#include "alignv/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <set>
#include <sstream>

namespace alignv {

const char* tagName(Tag t) {
  switch (t) {
    case Tag::None: return "";
    case Tag::Lck: return "lck";
    case Tag::Lo: return "lo";
    case Tag::Ro: return "ro";
    case Tag::Bit0: return "0";
    case Tag::Bit1: return "1";
  }
  return "?";
}

std::string toString(const Point& p) {
  if (!p.paired) return std::to_string(p.left);
  std::string s = "(" + std::to_string(p.left) + "," + std::to_string(p.right);
  if (p.tag != Tag::None) s += std::string(",") + tagName(p.tag);
  return s + ")";
}

std::string toString(const Domain& d) { return std::to_string(d.lo) + ".." + std::to_string(d.hi); }

namespace {

constexpr Label kUnset = INT_MIN;

enum class Tok : std::uint8_t { Int, Ident, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Value value = 0;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  static const char* const kSyms[] = {":=", "->", "&&", "||", "!=", "<>", "==", "<=", ">=", "..", "<", ">", "=",
                                      "+",  "-",  "*",  "%",  "!",  "(",  ")",  "{",  "}",  "[",  "]",  ",", ":", ";"};
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", line, col);
      }
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* s : kSyms) {
        std::string_view sv(s);
        if (src.substr(i, sv.size()) == sv) {
          t.kind = Tok::Sym;
          t.text = std::string(sv);
          advance(sv.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "skip", "if",   "then", "else", "fi",   "while", "do",    "od",   "choice", "or",  "end",
      "fin",  "true", "false", "and", "not",  "mod",   "agree", "bagree", "left", "right"};
  return k;
}

enum class Ctx : std::uint8_t { Program, ProgramPrimed, Unary, Relational };
enum class Force : std::uint8_t { None, Left, Right };

class Parser {
 public:
  Parser(std::string_view src, Ctx ctx) : toks_(tokenize(src)), ctx_(ctx) {}

  // ------------------------------------------------------------ utilities
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool atEnd() const { return peek().kind == Tok::End; }
  bool isSym(std::string_view s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
  bool isWord(std::string_view s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  [[noreturn]] void failAt(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.col); }

  void expectSym(std::string_view s) {
    if (!isSym(s)) fail("expected '" + std::string(s) + "'" + found());
    next();
  }
  void expectWord(std::string_view s) {
    if (!isWord(s)) fail("expected '" + std::string(s) + "'" + found());
    next();
  }
  std::string found() const {
    if (atEnd()) return " but reached end of input";
    return " but found '" + peek().text + "'";
  }
  void expectEnd() {
    if (!atEnd()) fail("unexpected trailing input" + found());
  }

  bool formulaMode() const { return ctx_ == Ctx::Unary || ctx_ == Ctx::Relational; }
  bool isAndOp() const { return isSym("&&") || isWord("and"); }
  bool isOrOp() const { return isSym("||") || (formulaMode() && isWord("or")); }
  bool isNotOp() const { return isSym("!") || isWord("not"); }

  // ---------------------------------------------------------- expressions
  Expr parseImplies() {
    Expr l = parseOr();
    if (isSym("->")) {
      if (!formulaMode()) fail("'->' is only allowed in assertions");
      next();
      return mkImplies(l, parseImplies());
    }
    return l;
  }

  Expr parseOr() {
    std::vector<Expr> parts{parseAnd()};
    while (isOrOp()) {
      next();
      parts.push_back(parseAnd());
    }
    return parts.size() == 1 ? parts[0] : Expr::disj(std::move(parts));
  }

  Expr parseAnd() {
    std::vector<Expr> parts{parseNot()};
    while (isAndOp()) {
      next();
      parts.push_back(parseNot());
    }
    return parts.size() == 1 ? parts[0] : Expr::conj(std::move(parts));
  }

  Expr parseNot() {
    if (isNotOp()) {
      next();
      return mkNot(parseNot());
    }
    return parseCompare();
  }

  std::optional<Op> compareOp() const {
    if (peek().kind != Tok::Sym) return std::nullopt;
    const std::string& s = peek().text;
    if (s == "=" || s == "==") return Op::Eq;
    if (s == "!=" || s == "<>") return Op::Ne;
    if (s == "<") return Op::Lt;
    if (s == "<=") return Op::Le;
    if (s == ">") return Op::Gt;
    if (s == ">=") return Op::Ge;
    return std::nullopt;
  }

  Expr parseCompare() {
    Expr first = parseAdd();
    std::vector<Expr> links;
    Expr prev = first;
    while (auto op = compareOp()) {
      next();
      Expr rhs = parseAdd();
      links.push_back(mkBin(*op, prev, rhs));
      prev = rhs;
    }
    if (links.empty()) return first;
    if (links.size() == 1) return links[0];
    return Expr::conj(std::move(links));
  }

  Expr parseAdd() {
    Expr l = parseMul();
    while (isSym("+") || isSym("-")) {
      Op op = next().text == "+" ? Op::Add : Op::Sub;
      l = mkBin(op, l, parseMul());
    }
    return l;
  }

  Expr parseMul() {
    Expr l = parseUnary();
    while (isSym("*") || isSym("%") || isWord("mod")) {
      Op op = next().text == "*" ? Op::Mul : Op::Mod;
      l = mkBin(op, l, parseUnary());
    }
    return l;
  }

  Expr parseUnary() {
    if (isSym("-")) {
      next();
      if (peek().kind == Tok::Int && !isSym("[", 1)) {
        Token t = next();
        return Expr::lit(static_cast<Value>(0 - static_cast<std::uint64_t>(t.value)));
      }
      return mkBin(Op::Sub, Expr::lit(0), parseUnary());
    }
    return parsePostfix();
  }

  Expr parsePostfix() {
    Expr e = parseAtom();
    while (isSym("[")) {
      next();
      Substitution sigma;
      while (true) {
        Token t = next();
        if (t.kind != Tok::Ident) failAt(t, "expected variable in substitution");
        VarRef v = resolveVar(t);
        expectSym(":=");
        Expr r = parseAdd();
        sigma.emplace_back(std::move(v), std::move(r));
        if (isSym(",")) {
          next();
          continue;
        }
        break;
      }
      expectSym("]");
      e = Expr::subst(e, std::move(sigma));
    }
    return e;
  }

  Value parseSignedInt() {
    bool neg = false;
    if (isSym("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::Int) fail("expected integer" + found());
    Value v = next().value;
    return neg ? static_cast<Value>(0 - static_cast<std::uint64_t>(v)) : v;
  }

  Expr parseSet() {
    expectSym("{");
    std::vector<VarRef> vars;
    while (!isSym(":")) {
      Token t = next();
      if (t.kind != Tok::Ident || keywords().count(t.text)) failAt(t, "expected variable in set header");
      vars.push_back(resolveVar(t));
      if (isSym(",")) next();
      else if (!isSym(":")) fail("expected ',' or ':' in set header" + found());
    }
    expectSym(":");
    std::vector<std::vector<Value>> rows;
    while (!isSym("}")) {
      expectSym("(");
      std::vector<Value> row;
      while (!isSym(")")) {
        row.push_back(parseSignedInt());
        if (isSym(",")) next();
        else if (!isSym(")")) fail("expected ',' or ')' in set row" + found());
      }
      next();
      if (row.size() != vars.size()) fail("set row has wrong number of values");
      rows.push_back(std::move(row));
      if (isSym(",")) next();
      else if (!isSym("}")) fail("expected ',' or '}' after set row" + found());
    }
    next();
    try {
      return Expr::set(std::make_shared<const StoreSet>(std::move(vars), std::move(rows)));
    } catch (const DomainError& e) {
      fail(e.what());
    }
  }

  Expr parseSided(Force f) {
    Force saved = force_;
    force_ = f;
    Expr e = parseImplies();
    force_ = saved;
    return e;
  }

  Expr parseAtom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return Expr::lit(t.value);
    }
    if (isSym("(")) {
      next();
      Expr e = parseImplies();
      expectSym(")");
      return e;
    }
    if (isSym("{")) {
      if (!formulaMode()) fail("extensional sets are only allowed in assertions");
      return parseSet();
    }
    if (t.kind != Tok::Ident) fail("expected expression" + found());
    if (t.text == "true" || t.text == "false") {
      next();
      return Expr::truth(t.text == "true");
    }
    if (formulaMode() && (t.text == "agree" || t.text == "bagree")) {
      Token kw = next();
      if (ctx_ != Ctx::Relational) failAt(kw, kw.text + " requires a relational assertion");
      if (force_ != Force::None) failAt(kw, kw.text + " cannot be nested inside left/right");
      expectSym("(");
      Expr l = parseSided(Force::Left);
      expectSym(",");
      Expr r = parseSided(Force::Right);
      expectSym(")");
      if (kw.text == "agree") return mkBin(Op::Eq, l, r);
      auto truth = [](const Expr& x) { return isBoolValued(x) ? x : mkBin(Op::Ne, x, Expr::lit(0)); };
      return mkBin(Op::Eq, truth(l), truth(r));
    }
    if (formulaMode() && (t.text == "left" || t.text == "right")) {
      Token kw = next();
      if (ctx_ != Ctx::Relational) failAt(kw, kw.text + " requires a relational assertion");
      Force f = kw.text == "left" ? Force::Left : Force::Right;
      if (force_ != Force::None && force_ != f) failAt(kw, "conflicting left/right embedding");
      expectSym("(");
      Expr e = parseSided(f);
      expectSym(")");
      return e;
    }
    if (keywords().count(t.text)) fail("unexpected keyword '" + t.text + "'");
    Token v = next();
    return Expr::var(resolveVar(v));
  }

  VarRef resolveVar(const Token& t) {
    if (keywords().count(t.text)) failAt(t, "keyword '" + t.text + "' used as a variable");
    const auto prime = t.text.find('\'');
    const bool primed = prime != std::string::npos;
    switch (ctx_) {
      case Ctx::Program:
        if (primed) failAt(t, "program variables may not end in a prime: " + t.text);
        return {t.text, Side::Plain};
      case Ctx::ProgramPrimed:
      case Ctx::Unary:
        return {t.text, Side::Plain};
      case Ctx::Relational: {
        std::string base = t.text.substr(0, prime);
        if (primed && t.text.size() - prime > 1) failAt(t, "at most one prime allowed in relational assertions: " + t.text);
        if (force_ == Force::Left) {
          if (primed) failAt(t, "primed variable inside a left-side expression: " + t.text);
          return {base, Side::Left};
        }
        if (force_ == Force::Right) return {base, Side::Right};
        return {base, primed ? Side::Right : Side::Left};
      }
    }
    return {t.text, Side::Plain};
  }

  // ------------------------------------------------------------- commands
  CommandPtr parseSeq() {
    CommandPtr c = parseStmt();
    if (isSym(";")) {
      next();
      if (atEnd() || isWord("else") || isWord("fi") || isWord("od") || isWord("or") || isWord("end") || isSym(")"))
        return c;
      return Command::seq(c, parseSeq());
    }
    return c;
  }

  CommandPtr parseStmt() {
    if (isSym("(")) {
      next();
      CommandPtr c = parseSeq();
      expectSym(")");
      return c;
    }
    Label n = kUnset;
    if (isSym("-") && peek(1).kind == Tok::Int && isSym(":", 2)) fail("negative labels are not allowed");
    if (peek().kind == Tok::Int && isSym(":", 1)) {
      Token t = next();
      next();
      if (t.value > INT_MAX) failAt(t, "label out of range");
      n = static_cast<Label>(t.value);
      explicit_.push_back({n, t});
    }
    if (isWord("skip")) {
      next();
      return Command::skip(n);
    }
    if (isWord("if")) {
      next();
      Expr e = parseImplies();
      expectWord("then");
      CommandPtr a = parseSeq();
      expectWord("else");
      CommandPtr b = parseSeq();
      expectWord("fi");
      return Command::ifThenElse(n, e, a, b);
    }
    if (isWord("while")) {
      next();
      Expr e = parseImplies();
      expectWord("do");
      CommandPtr body = parseSeq();
      expectWord("od");
      return Command::loop(n, e, body);
    }
    if (isWord("choice")) {
      next();
      CommandPtr a = parseSeq();
      expectWord("or");
      CommandPtr b = parseSeq();
      expectWord("end");
      return Command::choice(n, a, b);
    }
    if (peek().kind == Tok::Ident && isSym(":=", 1)) {
      Token t = next();
      VarRef v = resolveVar(t);
      next();
      return Command::assign(n, v.name, parseImplies());
    }
    fail("expected a command" + found());
  }

  // Checks explicit labels, then fills in the unlabelled nodes.
  CommandPtr finishLabels(const CommandPtr& c, std::optional<Label> fin, bool unique = true) {
    std::set<Label> used;
    for (const auto& [n, t] : explicit_) {
      if (!used.insert(n).second && unique) failAt(t, "duplicate label " + std::to_string(n));
      if (fin && n == *fin) failAt(t, "label " + std::to_string(n) + " collides with fin");
    }
    if (fin) used.insert(*fin);
    Label next = 1;
    return assignLabels(c, used, next);
  }

  CommandPtr assignLabels(const CommandPtr& c, std::set<Label>& used, Label& next) {
    auto fresh = [&](Label n) {
      if (n != kUnset) return n;
      while (used.count(next)) ++next;
      used.insert(next);
      return next;
    };
    switch (c->kind()) {
      case Command::Kind::Skip:
        return Command::skip(fresh(c->label()));
      case Command::Kind::Assign:
        return Command::assign(fresh(c->label()), c->target(), c->expr());
      case Command::Kind::Seq: {
        auto a = assignLabels(c->first(), used, next);
        auto b = assignLabels(c->second(), used, next);
        return Command::seq(a, b);
      }
      case Command::Kind::Choice: {
        Label n = fresh(c->label());
        auto a = assignLabels(c->first(), used, next);
        auto b = assignLabels(c->second(), used, next);
        return Command::choice(n, a, b);
      }
      case Command::Kind::If: {
        Label n = fresh(c->label());
        auto a = assignLabels(c->first(), used, next);
        auto b = assignLabels(c->second(), used, next);
        return Command::ifThenElse(n, c->expr(), a, b);
      }
      case Command::Kind::While: {
        Label n = fresh(c->label());
        auto a = assignLabels(c->body(), used, next);
        return Command::loop(n, c->expr(), a);
      }
    }
    return c;
  }

  Program parseProgramBody() {
    std::optional<Label> fin;
    if (isWord("fin")) {
      next();
      if (isSym("-")) fail("fin must be non-negative");
      if (peek().kind != Tok::Int) fail("expected integer after 'fin'" + found());
      Token t = next();
      if (t.value > INT_MAX) failAt(t, "fin out of range");
      fin = static_cast<Label>(t.value);
    }
    if (atEnd()) fail("empty program");
    CommandPtr c = parseSeq();
    expectEnd();
    Program p;
    p.fin = fin.value_or(0);
    p.body = finishLabels(c, p.fin);
    return p;
  }

  CommandPtr parseCommandOnly(bool unique) {
    CommandPtr c = parseSeq();
    expectEnd();
    return finishLabels(c, std::nullopt, unique);
  }

  Point parsePointTokens() {
    if (peek().kind == Tok::Int) return Point::unary(static_cast<Label>(next().value));
    expectSym("(");
    Value n = parseSignedInt();
    expectSym(",");
    Value m = parseSignedInt();
    Tag tag = Tag::None;
    if (isSym(",")) {
      next();
      Token t = next();
      if (t.kind == Tok::Ident && t.text == "lck") tag = Tag::Lck;
      else if (t.kind == Tok::Ident && t.text == "lo") tag = Tag::Lo;
      else if (t.kind == Tok::Ident && t.text == "ro") tag = Tag::Ro;
      else if (t.kind == Tok::Int && t.value == 0) tag = Tag::Bit0;
      else if (t.kind == Tok::Int && t.value == 1) tag = Tag::Bit1;
      else failAt(t, "unknown control tag '" + t.text + "'");
    }
    expectSym(")");
    return Point::pair(static_cast<Label>(n), static_cast<Label>(m), tag);
  }

  Domain parseDomainTokens() {
    Domain d;
    d.lo = parseSignedInt();
    expectSym("..");
    d.hi = parseSignedInt();
    if (d.hi < d.lo) fail("empty domain");
    return d;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Ctx ctx_;
  Force force_ = Force::None;
  std::vector<std::pair<Label, Token>> explicit_;
};

Ctx ctxFor(FormulaMode m) { return m == FormulaMode::Unary ? Ctx::Unary : Ctx::Relational; }

}  // namespace

Program parseProgram(std::string_view source) {
  Parser p(source, Ctx::Program);
  return p.parseProgramBody();
}

CommandPtr parseCommand(std::string_view source, bool allowPrimed) {
  Parser p(source, allowPrimed ? Ctx::ProgramPrimed : Ctx::Program);
  return p.parseCommandOnly(!allowPrimed);
}

Expr parseExpr(std::string_view source) {
  Parser p(source, Ctx::Program);
  Expr e = p.parseImplies();
  p.expectEnd();
  return e;
}

Expr parseFormulaText(std::string_view source, FormulaMode mode) {
  Parser p(source, ctxFor(mode));
  Expr e = p.parseImplies();
  p.expectEnd();
  return e;
}

Domain parseDomain(std::string_view text) {
  Parser p(text, Ctx::Program);
  Domain d = p.parseDomainTokens();
  p.expectEnd();
  return d;
}

Point parsePoint(std::string_view text) {
  Parser p(text, Ctx::Program);
  Point pt = p.parsePointTokens();
  p.expectEnd();
  return pt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Offsets a parse error reported relative to `line` text back into the file.
[[noreturn]] void rethrow(const ParseError& e, int line, int colOffset) {
  std::string msg = e.what();
  auto pos = msg.find(": ");
  if (pos != std::string::npos) msg = msg.substr(pos + 2);
  throw ParseError(msg, line + e.line() - 1, e.line() == 1 ? e.column() + colOffset : e.column());
}

}  // namespace

AnnotationFile parseAnnotationFile(std::string_view text, FormulaMode mode) {
  AnnotationFile out;
  int lineNo = 0;
  std::size_t start = 0;
  std::set<Point> seen;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    std::string_view content = raw.substr(0, raw.find('#'));
    if (trim(content).empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::size_t colon = content.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'point : formula'", lineNo, 1);
    std::string_view head = trim(content.substr(0, colon));
    std::string_view body = content.substr(colon + 1);
    const int bodyCol = static_cast<int>(colon) + 1;
    try {
      if (head == "pre" || head == "post") {
        Expr f = parseFormulaText(body, mode);
        (head == "pre" ? out.pre : out.post) = f;
      } else if (head == "domain") {
        out.domain = parseDomain(body);
      } else {
        Point p = parsePoint(head);
        if (!seen.insert(p).second) throw ParseError("point " + toString(p) + " annotated twice", 1, 1);
        out.entries.emplace_back(p, parseFormulaText(body, mode));
      }
    } catch (const ParseError& e) {
      rethrow(e, lineNo, bodyCol);
    }
    if (end == text.size()) break;
  }
  return out;
}

std::string formatAnnotationFile(const AnnotationFile& file) {
  std::ostringstream os;
  if (file.domain) os << "domain: " << toString(*file.domain) << '\n';
  if (file.pre) os << "pre: " << toFormulaString(*file.pre) << '\n';
  if (file.post) os << "post: " << toFormulaString(*file.post) << '\n';
  for (const auto& [p, f] : file.entries) os << toString(p) << " : " << toFormulaString(f) << '\n';
  return os.str();
}

}  // namespace alignv
