#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "alignv/expr.hpp"

namespace alignv {

using Label = int;

class Command;
using CommandPtr = std::shared_ptr<const Command>;

class Command {
  struct Token {};

 public:
  enum class Kind : std::uint8_t { Skip, Assign, Seq, Choice, If, While };

  static CommandPtr skip(Label n);
  static CommandPtr assign(Label n, std::string x, Expr e);
  static CommandPtr seq(CommandPtr a, CommandPtr b);
  static CommandPtr choice(Label n, CommandPtr a, CommandPtr b);
  static CommandPtr ifThenElse(Label n, Expr test, CommandPtr a, CommandPtr b);
  static CommandPtr loop(Label n, Expr test, CommandPtr body);

  Command(Token, Kind k, Label n, std::string x, Expr e, CommandPtr a, CommandPtr b);

  Kind kind() const { return kind_; }
  // lab(c); for a sequence this is the label of its first command.
  Label label() const { return label_; }
  const std::string& target() const { return target_; }
  // Assigned expression, or the test of if/while.
  const Expr& expr() const { return expr_; }
  // Seq: first part; Choice/If: left/then branch; While: body.
  const CommandPtr& first() const { return first_; }
  // Seq: second part; Choice/If: right/else branch.
  const CommandPtr& second() const { return second_; }
  const CommandPtr& body() const { return first_; }
  std::size_t hash() const { return hash_; }

 private:
  Kind kind_;
  Label label_;
  std::string target_;
  Expr expr_;
  CommandPtr first_;
  CommandPtr second_;
  std::size_t hash_;
};

// Structural equality including labels.
bool operator==(const Command& a, const Command& b);
bool sameCommand(const CommandPtr& a, const CommandPtr& b);
// Structural equality ignoring labels.
bool equalModuloLabels(const Command& a, const Command& b);

const char* kindName(Command::Kind k);

struct Program {
  CommandPtr body;
  Label fin = 0;

  // body ; skip^fin
  CommandPtr full() const { return Command::seq(body, Command::skip(fin)); }
};

bool ok(const Command& c);
bool ok(const Program& p);
std::vector<Label> labs(const Command& c);
bool hasLabel(const Command& c, Label n);
Label lab(const Command& c);
CommandPtr sub(Label n, const CommandPtr& c);
Label fsuc(Label n, const Command& c, Label f);
bool isSubterm(const Command& b, const Command& c);
Label elab(const Command& b, const Command& c, Label fin);

bool choiceFree(const Command& c);
std::set<std::string> variables(const Command& c);
// Variables read by the expressions of the command (tests and right-hand sides).
std::set<std::string> readVariables(const Command& c);

// Same tree shape, labels and kinds; `relaxed` additionally lets an
// assignment stand opposite a skip.
bool sameCtl(const Command& c, const Command& d, bool relaxed = false);

CommandPtr mapCommandVars(const CommandPtr& c, const std::function<VarRef(const VarRef&)>& f);
// Renames every variable x to x' (the dotted copy used by the sequential encoding).
CommandPtr dotted(const CommandPtr& c);
Expr dotted(const Expr& e);
std::string dottedName(const std::string& x);
// Fresh preorder labels starting at `start`.
CommandPtr relabel(const CommandPtr& c, Label start = 1);
// Replaces the (first, in preorder) occurrence of subterm `b` in `c`.
CommandPtr replaceSubterm(const CommandPtr& c, const Command& b, const CommandPtr& replacement);

// Single-line rendering with explicit labels, re-parseable.
std::string toString(const Command& c);
// Indented multi-line rendering with explicit labels and fin header.
std::string prettyPrint(const Program& p);
std::string prettyPrint(const Command& c, int indent = 0);

}  // namespace alignv
