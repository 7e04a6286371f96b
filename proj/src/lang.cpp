#include "alignv/lang.hpp"

#include <algorithm>
#include <sstream>

namespace alignv {

Command::Command(Token, Kind k, Label n, std::string x, Expr e, CommandPtr a, CommandPtr b)
    : kind_(k), label_(n), target_(std::move(x)), expr_(std::move(e)), first_(std::move(a)), second_(std::move(b)) {
  std::size_t h = hashCombine(static_cast<std::size_t>(k) + 101, std::hash<Label>{}(n));
  h = hashCombine(h, std::hash<std::string>{}(target_));
  h = hashCombine(h, expr_.hash());
  if (first_) h = hashCombine(h, first_->hash());
  if (second_) h = hashCombine(h, second_->hash());
  hash_ = h;
}

CommandPtr Command::skip(Label n) { return std::make_shared<const Command>(Token{}, Kind::Skip, n, "", Expr(), nullptr, nullptr); }

CommandPtr Command::assign(Label n, std::string x, Expr e) {
  return std::make_shared<const Command>(Token{}, Kind::Assign, n, std::move(x), std::move(e), nullptr, nullptr);
}

CommandPtr Command::seq(CommandPtr a, CommandPtr b) {
  Label n = a->label();
  return std::make_shared<const Command>(Token{}, Kind::Seq, n, "", Expr(), std::move(a), std::move(b));
}

CommandPtr Command::choice(Label n, CommandPtr a, CommandPtr b) {
  return std::make_shared<const Command>(Token{}, Kind::Choice, n, "", Expr(), std::move(a), std::move(b));
}

CommandPtr Command::ifThenElse(Label n, Expr test, CommandPtr a, CommandPtr b) {
  return std::make_shared<const Command>(Token{}, Kind::If, n, "", std::move(test), std::move(a), std::move(b));
}

CommandPtr Command::loop(Label n, Expr test, CommandPtr body) {
  return std::make_shared<const Command>(Token{}, Kind::While, n, "", std::move(test), std::move(body), nullptr);
}

const char* kindName(Command::Kind k) {
  switch (k) {
    case Command::Kind::Skip: return "skip";
    case Command::Kind::Assign: return "assignment";
    case Command::Kind::Seq: return "sequence";
    case Command::Kind::Choice: return "choice";
    case Command::Kind::If: return "if";
    case Command::Kind::While: return "while";
  }
  return "?";
}

namespace {

bool equalNodes(const Command& a, const Command& b, bool withLabels) {
  if (&a == &b) return true;
  if (withLabels && a.hash() != b.hash()) return false;
  if (a.kind() != b.kind()) return false;
  if (withLabels && a.kind() != Command::Kind::Seq && a.label() != b.label()) return false;
  if (a.target() != b.target()) return false;
  if (!(a.expr() == b.expr())) return false;
  if (static_cast<bool>(a.first()) != static_cast<bool>(b.first())) return false;
  if (a.first() && !equalNodes(*a.first(), *b.first(), withLabels)) return false;
  if (static_cast<bool>(a.second()) != static_cast<bool>(b.second())) return false;
  if (a.second() && !equalNodes(*a.second(), *b.second(), withLabels)) return false;
  return true;
}

void collectLabels(const Command& c, std::vector<Label>& out) {
  if (c.kind() != Command::Kind::Seq) out.push_back(c.label());
  if (c.first()) collectLabels(*c.first(), out);
  if (c.second()) collectLabels(*c.second(), out);
}

}  // namespace

bool operator==(const Command& a, const Command& b) { return equalNodes(a, b, true); }

bool sameCommand(const CommandPtr& a, const CommandPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

bool equalModuloLabels(const Command& a, const Command& b) { return equalNodes(a, b, false); }

bool ok(const Command& c) {
  std::vector<Label> ls;
  collectLabels(c, ls);
  std::sort(ls.begin(), ls.end());
  if (!ls.empty() && ls.front() < 0) return false;
  return std::adjacent_find(ls.begin(), ls.end()) == ls.end();
}

bool ok(const Program& p) { return p.body && ok(*p.body) && p.fin >= 0 && !hasLabel(*p.body, p.fin); }

std::vector<Label> labs(const Command& c) {
  std::vector<Label> ls;
  collectLabels(c, ls);
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
  return ls;
}

bool hasLabel(const Command& c, Label n) {
  if (c.kind() != Command::Kind::Seq && c.label() == n) return true;
  if (c.first() && hasLabel(*c.first(), n)) return true;
  return c.second() && hasLabel(*c.second(), n);
}

Label lab(const Command& c) { return c.label(); }

namespace {

const CommandPtr* findSub(const CommandPtr& c, Label n) {
  if (c->kind() != Command::Kind::Seq && c->label() == n) return &c;
  if (c->first())
    if (auto r = findSub(c->first(), n)) return r;
  if (c->second())
    if (auto r = findSub(c->second(), n)) return r;
  return nullptr;
}

}  // namespace

CommandPtr sub(Label n, const CommandPtr& c) {
  if (auto r = findSub(c, n)) return *r;
  throw DomainError("label " + std::to_string(n) + " does not occur in the command");
}

namespace {

Label follow(Label n, const Command& c, Label f) {
  switch (c.kind()) {
    case Command::Kind::Skip:
    case Command::Kind::Assign:
      if (c.label() != n) break;
      return f;
    case Command::Kind::Seq:
      if (hasLabel(*c.first(), n)) return follow(n, *c.first(), lab(*c.second()));
      return follow(n, *c.second(), f);
    case Command::Kind::While:
      if (n == c.label()) return f;
      if (hasLabel(*c.body(), n)) return follow(n, *c.body(), c.label());
      break;
    case Command::Kind::If:
    case Command::Kind::Choice:
      if (n == c.label()) return f;
      if (hasLabel(*c.first(), n)) return follow(n, *c.first(), f);
      if (hasLabel(*c.second(), n)) return follow(n, *c.second(), f);
      break;
  }
  throw DomainError("fsuc: label " + std::to_string(n) + " does not occur in the command");
}

}  // namespace

Label fsuc(Label n, const Command& c, Label f) {
  if (!ok(c)) throw DomainError("fsuc: command is not well labelled");
  if (hasLabel(c, f)) throw DomainError("fsuc: exit label " + std::to_string(f) + " occurs in the command");
  return follow(n, c, f);
}

bool isSubterm(const Command& b, const Command& c) {
  if (b == c) return true;
  if (c.first() && isSubterm(b, *c.first())) return true;
  return c.second() && isSubterm(b, *c.second());
}

Label elab(const Command& b, const Command& c, Label fin) {
  if (!isSubterm(b, c)) throw DomainError("elab: command is not a subterm of the program");
  if (b.kind() == Command::Kind::Seq) return elab(*b.second(), c, fin);
  return fsuc(b.label(), c, fin);
}

bool choiceFree(const Command& c) {
  if (c.kind() == Command::Kind::Choice) return false;
  if (c.first() && !choiceFree(*c.first())) return false;
  return !c.second() || choiceFree(*c.second());
}

namespace {

void collectVars(const Command& c, std::set<std::string>& out, bool writes) {
  if (c.kind() == Command::Kind::Assign && writes) out.insert(c.target());
  if (c.kind() == Command::Kind::Assign || c.kind() == Command::Kind::If || c.kind() == Command::Kind::While)
    for (const auto& v : freeVars(c.expr())) out.insert(v.name);
  if (c.first()) collectVars(*c.first(), out, writes);
  if (c.second()) collectVars(*c.second(), out, writes);
}

}  // namespace

std::set<std::string> variables(const Command& c) {
  std::set<std::string> out;
  collectVars(c, out, true);
  return out;
}

std::set<std::string> readVariables(const Command& c) {
  std::set<std::string> out;
  collectVars(c, out, false);
  return out;
}

bool sameCtl(const Command& c, const Command& d, bool relaxed) {
  using K = Command::Kind;
  const bool atomicPair = relaxed && (c.kind() == K::Assign || c.kind() == K::Skip) &&
                          (d.kind() == K::Assign || d.kind() == K::Skip);
  if (c.kind() != d.kind() && !atomicPair) return false;
  if (c.kind() != K::Seq && c.label() != d.label()) return false;
  if (static_cast<bool>(c.first()) != static_cast<bool>(d.first())) return false;
  if (c.first() && !sameCtl(*c.first(), *d.first(), relaxed)) return false;
  if (static_cast<bool>(c.second()) != static_cast<bool>(d.second())) return false;
  return !c.second() || sameCtl(*c.second(), *d.second(), relaxed);
}

CommandPtr mapCommandVars(const CommandPtr& c, const std::function<VarRef(const VarRef&)>& f) {
  switch (c->kind()) {
    case Command::Kind::Skip:
      return c;
    case Command::Kind::Assign:
      return Command::assign(c->label(), f(VarRef{c->target(), Side::Plain}).name, mapVars(c->expr(), f));
    case Command::Kind::Seq:
      return Command::seq(mapCommandVars(c->first(), f), mapCommandVars(c->second(), f));
    case Command::Kind::Choice:
      return Command::choice(c->label(), mapCommandVars(c->first(), f), mapCommandVars(c->second(), f));
    case Command::Kind::If:
      return Command::ifThenElse(c->label(), mapVars(c->expr(), f), mapCommandVars(c->first(), f),
                                 mapCommandVars(c->second(), f));
    case Command::Kind::While:
      return Command::loop(c->label(), mapVars(c->expr(), f), mapCommandVars(c->body(), f));
  }
  return c;
}

std::string dottedName(const std::string& x) { return x + "'"; }

namespace {

VarRef dotVar(const VarRef& v) {
  if (v.side != Side::Plain) throw DomainError("dotting applies to unary variables only: " + toString(v));
  return VarRef{dottedName(v.name), Side::Plain};
}

}  // namespace

CommandPtr dotted(const CommandPtr& c) { return mapCommandVars(c, dotVar); }
Expr dotted(const Expr& e) { return mapVars(e, dotVar); }

namespace {

CommandPtr relabelRec(const CommandPtr& c, Label& next) {
  switch (c->kind()) {
    case Command::Kind::Skip:
      return Command::skip(next++);
    case Command::Kind::Assign:
      return Command::assign(next++, c->target(), c->expr());
    case Command::Kind::Seq: {
      auto a = relabelRec(c->first(), next);
      auto b = relabelRec(c->second(), next);
      return Command::seq(a, b);
    }
    case Command::Kind::Choice: {
      Label n = next++;
      auto a = relabelRec(c->first(), next);
      auto b = relabelRec(c->second(), next);
      return Command::choice(n, a, b);
    }
    case Command::Kind::If: {
      Label n = next++;
      auto a = relabelRec(c->first(), next);
      auto b = relabelRec(c->second(), next);
      return Command::ifThenElse(n, c->expr(), a, b);
    }
    case Command::Kind::While: {
      Label n = next++;
      auto a = relabelRec(c->body(), next);
      return Command::loop(n, c->expr(), a);
    }
  }
  return c;
}

CommandPtr rebuildWith(const CommandPtr& c, CommandPtr a, CommandPtr b) {
  switch (c->kind()) {
    case Command::Kind::Seq: return Command::seq(std::move(a), std::move(b));
    case Command::Kind::Choice: return Command::choice(c->label(), std::move(a), std::move(b));
    case Command::Kind::If: return Command::ifThenElse(c->label(), c->expr(), std::move(a), std::move(b));
    case Command::Kind::While: return Command::loop(c->label(), c->expr(), std::move(a));
    default: return c;
  }
}

CommandPtr replaceRec(const CommandPtr& c, const Command& b, const CommandPtr& r, bool& done) {
  if (done) return c;
  if (*c == b) {
    done = true;
    return r;
  }
  if (!c->first()) return c;
  auto a = replaceRec(c->first(), b, r, done);
  auto d = c->second() ? replaceRec(c->second(), b, r, done) : nullptr;
  if (a == c->first() && d == c->second()) return c;
  return rebuildWith(c, a, d);
}

void printOneLine(std::ostream& os, const Command& c) {
  switch (c.kind()) {
    case Command::Kind::Skip:
      os << c.label() << ": skip";
      break;
    case Command::Kind::Assign:
      os << c.label() << ": " << c.target() << " := " << toString(c.expr());
      break;
    case Command::Kind::Seq:
      if (c.first()->kind() == Command::Kind::Seq) {
        os << '(';
        printOneLine(os, *c.first());
        os << ')';
      } else {
        printOneLine(os, *c.first());
      }
      os << "; ";
      printOneLine(os, *c.second());
      break;
    case Command::Kind::Choice:
      os << c.label() << ": choice ";
      printOneLine(os, *c.first());
      os << " or ";
      printOneLine(os, *c.second());
      os << " end";
      break;
    case Command::Kind::If:
      os << c.label() << ": if " << toString(c.expr()) << " then ";
      printOneLine(os, *c.first());
      os << " else ";
      printOneLine(os, *c.second());
      os << " fi";
      break;
    case Command::Kind::While:
      os << c.label() << ": while " << toString(c.expr()) << " do ";
      printOneLine(os, *c.body());
      os << " od";
      break;
  }
}

void printIndented(std::ostream& os, const Command& c, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (c.kind()) {
    case Command::Kind::Seq:
      if (c.first()->kind() == Command::Kind::Seq) {
        os << pad << "(\n";
        printIndented(os, *c.first(), indent + 1);
        os << '\n' << pad << ')';
      } else {
        printIndented(os, *c.first(), indent);
      }
      os << ";\n";
      printIndented(os, *c.second(), indent);
      break;
    case Command::Kind::Choice:
      os << pad << c.label() << ": choice\n";
      printIndented(os, *c.first(), indent + 1);
      os << '\n' << pad << "or\n";
      printIndented(os, *c.second(), indent + 1);
      os << '\n' << pad << "end";
      break;
    case Command::Kind::If:
      os << pad << c.label() << ": if " << toString(c.expr()) << " then\n";
      printIndented(os, *c.first(), indent + 1);
      os << '\n' << pad << "else\n";
      printIndented(os, *c.second(), indent + 1);
      os << '\n' << pad << "fi";
      break;
    case Command::Kind::While:
      os << pad << c.label() << ": while " << toString(c.expr()) << " do\n";
      printIndented(os, *c.body(), indent + 1);
      os << '\n' << pad << "od";
      break;
    default:
      os << pad;
      printOneLine(os, c);
  }
}

}  // namespace

CommandPtr relabel(const CommandPtr& c, Label start) {
  Label next = start;
  return relabelRec(c, next);
}

CommandPtr replaceSubterm(const CommandPtr& c, const Command& b, const CommandPtr& replacement) {
  bool done = false;
  auto r = replaceRec(c, b, replacement, done);
  if (!done) throw DomainError("replaceSubterm: subterm not found");
  return r;
}

std::string toString(const Command& c) {
  std::ostringstream os;
  printOneLine(os, c);
  return os.str();
}

std::string prettyPrint(const Command& c, int indent) {
  std::ostringstream os;
  printIndented(os, c, indent);
  return os.str();
}

std::string prettyPrint(const Program& p) {
  std::ostringstream os;
  os << "fin " << p.fin << '\n';
  printIndented(os, *p.body, 0);
  os << '\n';
  return os.str();
}

}  // namespace alignv
