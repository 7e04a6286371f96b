#include "alignv/judgment.hpp"

namespace alignv {

Judgment Judgment::unary(CommandPtr c, Formula p, Formula q) {
  if (p.arity() == Arity::Relational || q.arity() == Arity::Relational)
    throw DomainError("unary judgment with a relational assertion");
  return {false, std::move(c), nullptr, std::move(p), std::move(q)};
}

Judgment Judgment::rel(CommandPtr c, CommandPtr d, Formula r, Formula s) {
  if (r.arity() == Arity::Unary || s.arity() == Arity::Unary)
    throw DomainError("relational judgment with a unary assertion");
  return {true, std::move(c), std::move(d), std::move(r), std::move(s)};
}

namespace {

bool sameFormulas(const Judgment& a, const Judgment& b) {
  return a.relational == b.relational && sameFormula(a.pre, b.pre) && sameFormula(a.post, b.post);
}

}  // namespace

bool operator==(const Judgment& a, const Judgment& b) {
  if (!sameFormulas(a, b) || !sameCommand(a.left, b.left)) return false;
  return !a.relational || sameCommand(a.right, b.right);
}

bool sameModuloLabels(const Judgment& a, const Judgment& b) {
  if (!sameFormulas(a, b) || !equalModuloLabels(*a.left, *b.left)) return false;
  return !a.relational || equalModuloLabels(*a.right, *b.right);
}

std::size_t hashJudgment(const Judgment& j) {
  std::size_t h = hashCombine(j.left->hash(), j.relational ? j.right->hash() : 0);
  h = hashCombine(h, normalize(j.pre.expr()).hash());
  return hashCombine(h, normalize(j.post.expr()).hash());
}

std::string toString(const Judgment& j) {
  if (!j.relational) return toString(*j.left) + " : {" + toString(j.pre) + "}{" + toString(j.post) + "}";
  return toString(*j.left) + " | " + toString(*j.right) + " : <" + toString(j.pre) + "><" + toString(j.post) + ">";
}

}  // namespace alignv
