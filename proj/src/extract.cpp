#include "alignv/extract.hpp"

#include <algorithm>
#include <functional>

namespace alignv {

const char* theoremName(Theorem t) {
  switch (t) {
    case Theorem::Floyd: return "floyd";
    case Theorem::SeqProd: return "seqprod";
    case Theorem::Lockstep: return "lockstep";
    case Theorem::LockstepSeq: return "lockstep-seq";
    case Theorem::CaWhile: return "cawhile";
  }
  return "?";
}

Theorem parseTheorem(const std::string& name) {
  for (Theorem t : {Theorem::Floyd, Theorem::SeqProd, Theorem::Lockstep, Theorem::LockstepSeq, Theorem::CaWhile})
    if (name == theoremName(t)) return t;
  throw DomainError("unknown theorem '" + name + "' (floyd, seqprod, lockstep, lockstep-seq, cawhile)");
}

namespace {

using Kind = Command::Kind;
using AtFn = std::function<Formula(Label)>;

struct Emit {
  Domain dom;

  Derivation node(Rule r, Judgment j, std::vector<Derivation> ps = {}, std::vector<SideCondition> sides = {}) const {
    Derivation d;
    d.rule = r;
    d.conclusion = std::move(j);
    d.premises = std::move(ps);
    d.sides = std::move(sides);
    d.domain = dom;
    return d;
  }

  Derivation conseq(Derivation d, const Formula& pre, const Formula& post) const {
    const Judgment& j = d.conclusion;
    Judgment c = j.relational ? Judgment::rel(j.left, j.right, pre, post) : Judgment::unary(j.left, pre, post);
    std::vector<SideCondition> sides{{pre, j.pre}, {j.post, post}};
    const Rule r = j.relational ? Rule::RConseq : Rule::Conseq;
    return node(r, std::move(c), {std::move(d)}, std::move(sides));
  }
};

// Hoare-logic claim b : {at(lab b)}{at(elab b)} for subprograms of `whole`.
struct Floyd {
  const Emit& em;
  CommandPtr whole;
  Label fin;
  AtFn at;

  Derivation claim(const CommandPtr& b) const {
    const Formula pre = at(lab(*b)), post = at(elab(*b, *whole, fin));
    auto J = [&](const Formula& p, const Formula& q) { return Judgment::unary(b, p, q); };
    switch (b->kind()) {
      case Kind::Skip: return em.conseq(em.node(Rule::Skip, J(post, post)), pre, post);
      case Kind::Assign:
        return em.conseq(em.node(Rule::Ass, J(substU(post, b->target(), b->expr()), post)), pre, post);
      case Kind::Seq: return em.node(Rule::Seq, J(pre, post), {claim(b->first()), claim(b->second())});
      case Kind::If: {
        const Formula t(b->expr());
        return em.node(Rule::If, J(pre, post),
                       {em.conseq(claim(b->first()), conj(pre, t), post),
                        em.conseq(claim(b->second()), conj(pre, neg(t)), post)});
      }
      case Kind::While: {
        const Formula t(b->expr());
        Derivation body = em.conseq(claim(b->body()), conj(pre, t), pre);
        return em.conseq(em.node(Rule::Wh, J(pre, conj(pre, neg(t))), {std::move(body)}), pre, post);
      }
      case Kind::Choice:
        return em.node(Rule::Choice, J(pre, post),
                       {em.conseq(claim(b->first()), pre, post), em.conseq(claim(b->second()), pre, post)});
    }
    throw DomainError("unreachable");
  }
};

using Special = std::function<std::optional<Derivation>(const CommandPtr&, const CommandPtr&)>;

// Lockstep claim b | b' : <at(lab b)><at(elab b)> for corresponding
// subprograms of two same-control programs.
struct Lockstep {
  const Emit& em;
  CommandPtr whole;
  Label fin;
  AtFn at;
  bool relaxed = false;
  Special special;

  Derivation claim(const CommandPtr& b, const CommandPtr& b2) const {
    if (special)
      if (auto d = special(b, b2)) return std::move(*d);
    const Formula pre = at(lab(*b)), post = at(elab(*b, *whole, fin));
    auto J = [&](const Formula& p, const Formula& q) { return Judgment::rel(b, b2, p, q); };
    const Kind k = b->kind(), k2 = b2->kind();
    if (k == Kind::Skip && k2 == Kind::Skip) return em.conseq(em.node(Rule::DSkip, J(post, post)), pre, post);
    if (k == Kind::Assign && k2 == Kind::Assign)
      return em.conseq(
          em.node(Rule::DAss,
                  J(substR(post, SideAssign{b->target(), b->expr()}, SideAssign{b2->target(), b2->expr()}), post)),
          pre, post);
    if (relaxed && k == Kind::Assign && k2 == Kind::Skip)
      return em.conseq(em.node(Rule::AssSkip, J(substR(post, SideAssign{b->target(), b->expr()}, std::nullopt), post)),
                       pre, post);
    if (relaxed && k == Kind::Skip && k2 == Kind::Assign)
      return em.conseq(
          em.node(Rule::SkipAss, J(substR(post, std::nullopt, SideAssign{b2->target(), b2->expr()}), post)), pre, post);
    if (k != k2)
      throw ExtractionRefused("same control", "`" + toString(*b) + "` stands opposite `" + toString(*b2) + "`");
    switch (k) {
      case Kind::Seq:
        return em.node(Rule::DSeq, J(pre, post), {claim(b->first(), b2->first()), claim(b->second(), b2->second())});
      case Kind::If: {
        const Formula l = leftOf(b->expr()), r = rightOf(b2->expr());
        return em.node(Rule::DIf, J(pre, post),
                       {em.conseq(claim(b->first(), b2->first()), conj(conj(pre, l), r), post),
                        em.conseq(claim(b->second(), b2->second()), conj(conj(pre, neg(l)), neg(r)), post)},
                       {{pre, bagree(b->expr(), b2->expr())}});
      }
      case Kind::While: {
        const Formula l = leftOf(b->expr()), r = rightOf(b2->expr());
        Derivation body = em.conseq(claim(b->body(), b2->body()), conj(conj(pre, l), r), pre);
        Derivation w = em.node(Rule::DWh, J(pre, conj(conj(pre, neg(l)), neg(r))), {std::move(body)},
                               {{pre, bagree(b->expr(), b2->expr())}});
        return em.conseq(std::move(w), pre, post);
      }
      default:
        throw ExtractionRefused("choice-free", "`" + toString(*b) + "` contains a choice");
    }
  }
};

// One-sided claim b | skip (or skip | b) : <at(lab b)><at(elab b)>.
struct OneSided {
  const Emit& em;
  CommandPtr whole;
  Label fin;
  AtFn at;
  Side side;
  CommandPtr skip;

  Derivation claim(const CommandPtr& b) const {
    const Formula pre = at(lab(*b)), post = at(elab(*b, *whole, fin));
    const bool left = side == Side::Left;
    auto J = [&](const Formula& p, const Formula& q) {
      return left ? Judgment::rel(b, skip, p, q) : Judgment::rel(skip, b, p, q);
    };
    auto test = [&] { return left ? leftOf(b->expr()) : rightOf(b->expr()); };
    switch (b->kind()) {
      case Kind::Skip: return em.conseq(em.node(Rule::SkipSkip, J(post, post)), pre, post);
      case Kind::Assign: {
        const SideAssign a{b->target(), b->expr()};
        const Formula wp = left ? substR(post, a, std::nullopt) : substR(post, std::nullopt, a);
        return em.conseq(em.node(left ? Rule::AssSkip : Rule::SkipAss, J(wp, post)), pre, post);
      }
      case Kind::Seq:
        return em.node(left ? Rule::SeqSkip : Rule::SkipSeq, J(pre, post), {claim(b->first()), claim(b->second())});
      case Kind::If: {
        const Formula t = test();
        return em.node(left ? Rule::IfSkip : Rule::SkipIf, J(pre, post),
                       {em.conseq(claim(b->first()), conj(pre, t), post),
                        em.conseq(claim(b->second()), conj(pre, neg(t)), post)});
      }
      case Kind::While: {
        const Formula t = test();
        Derivation body = em.conseq(claim(b->body()), conj(pre, t), pre);
        return em.conseq(em.node(left ? Rule::WhSkip : Rule::SkipWh, J(pre, conj(pre, neg(t))), {std::move(body)}),
                         pre, post);
      }
      case Kind::Choice: throw ExtractionRefused("choice-free", "`" + toString(*b) + "` contains a choice");
    }
    throw DomainError("unreachable");
  }
};

// ---- associated judgment families ----

void addUnique(std::vector<Judgment>& out, Judgment j) {
  if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(std::move(j));
}

using Stop = std::function<bool(const CommandPtr&, const CommandPtr&)>;

void lockFamily(const CommandPtr& b, const CommandPtr& b2, const Command& whole, Label fin, const AtFn& at,
                const Stop& stop, std::vector<Judgment>& out) {
  const Formula pre = at(lab(*b)), post = at(elab(*b, whole, fin));
  addUnique(out, Judgment::rel(b, b2, pre, post));
  if (stop && stop(b, b2)) return;
  const Kind k = b->kind(), k2 = b2->kind();
  if (k == Kind::Assign || k2 == Kind::Assign) {
    std::optional<SideAssign> l, r;
    if (k == Kind::Assign) l = SideAssign{b->target(), b->expr()};
    if (k2 == Kind::Assign) r = SideAssign{b2->target(), b2->expr()};
    addUnique(out, Judgment::rel(b, b2, substR(post, l, r), post));
    return;
  }
  if (k != k2) return;
  if (k == Kind::If || k == Kind::While) {
    const Formula l = leftOf(b->expr()), r = rightOf(b2->expr());
    const Formula yes = conj(l, r), no = conj(neg(l), neg(r));
    if (k == Kind::While) {
      addUnique(out, Judgment::rel(b, b2, pre, conj(pre, no)));
      const Formula bodyPost = at(elab(*b->body(), whole, fin));
      addUnique(out, Judgment::rel(b->body(), b2->body(), conj(at(lab(*b->body())), yes), bodyPost));
      addUnique(out, Judgment::rel(b->body(), b2->body(), conj(pre, yes), bodyPost));
    } else {
      for (int branch = 0; branch < 2; ++branch) {
        const CommandPtr& x = branch == 0 ? b->first() : b->second();
        const CommandPtr& y = branch == 0 ? b2->first() : b2->second();
        const Formula& t = branch == 0 ? yes : no;
        const Formula xPost = at(elab(*x, whole, fin));
        addUnique(out, Judgment::rel(x, y, conj(at(lab(*x)), t), xPost));
        addUnique(out, Judgment::rel(x, y, conj(pre, t), xPost));
      }
    }
  }
  if (b->first() && b2->first()) lockFamily(b->first(), b2->first(), whole, fin, at, stop, out);
  if (b->second() && b2->second()) lockFamily(b->second(), b2->second(), whole, fin, at, stop, out);
}

void oneSidedFamily(const CommandPtr& b, const Command& whole, Label fin, const AtFn& at, Side side,
                    const CommandPtr& skip, std::vector<Judgment>& out) {
  const bool left = side == Side::Left;
  auto J = [&](const CommandPtr& x, const Formula& p, const Formula& q) {
    return left ? Judgment::rel(x, skip, p, q) : Judgment::rel(skip, x, p, q);
  };
  auto T = [&](const Expr& e) { return left ? leftOf(e) : rightOf(e); };
  const Formula pre = at(lab(*b)), post = at(elab(*b, whole, fin));
  addUnique(out, J(b, pre, post));
  switch (b->kind()) {
    case Kind::Assign: {
      const SideAssign a{b->target(), b->expr()};
      addUnique(out, J(b, left ? substR(post, a, std::nullopt) : substR(post, std::nullopt, a), post));
      break;
    }
    case Kind::While: {
      const Formula t = T(b->expr());
      addUnique(out, J(b, pre, conj(pre, neg(t))));
      const Formula bodyPost = at(elab(*b->body(), whole, fin));
      addUnique(out, J(b->body(), conj(at(lab(*b->body())), t), bodyPost));
      addUnique(out, J(b->body(), conj(pre, t), bodyPost));
      break;
    }
    case Kind::If: {
      const Formula t = T(b->expr());
      for (int branch = 0; branch < 2; ++branch) {
        const CommandPtr& x = branch == 0 ? b->first() : b->second();
        const Formula g = branch == 0 ? t : neg(t);
        const Formula xPost = at(elab(*x, whole, fin));
        addUnique(out, J(x, conj(at(lab(*x)), g), xPost));
        addUnique(out, J(x, conj(pre, g), xPost));
      }
      break;
    }
    default:
      break;
  }
  if (b->first()) oneSidedFamily(b->first(), whole, fin, at, side, skip, out);
  if (b->second()) oneSidedFamily(b->second(), whole, fin, at, side, skip, out);
}

void append(std::vector<Judgment>& out, const std::vector<Judgment>& more) {
  for (const auto& j : more) addUnique(out, j);
}

// ---- validation ----

std::string describe(const Witness& w, bool relational) {
  if (!relational) return toString(w.left);
  return toString(w.left) + " | " + toString(w.right);
}

std::vector<SideCondition> validate(const Automaton& a, const Annotation& an, const Domain& dom, bool encode) {
  if (!an.isFull(a)) throw ExtractionRefused("full annotation", "some control points are not annotated");
  auto results = checkVCs(a, an, dom);
  std::vector<SideCondition> vcs;
  for (const auto& r : results) {
    if (r.verdict != Verdict::Holds) {
      std::string detail = "VC " + r.vc.rendered + " along " + toString(r.vc.segment) + " " + verdictName(r.verdict) +
                           " over " + toString(dom);
      if (r.witness) detail += "; witness " + describe(*r.witness, a.paired());
      throw ExtractionRefused("valid annotation", detail);
    }
    vcs.push_back({r.vc.lhs, r.vc.rhs});
    if (encode && a.paired()) vcs.push_back({encodePlus(r.vc.lhs), encodePlus(r.vc.rhs)});
  }
  return vcs;
}

struct Branch {
  Label n;
  Expr e;
  Expr e2;
};

void branchPoints(const CommandPtr& c, const CommandPtr& c2, std::vector<Branch>& out) {
  if (c->kind() != c2->kind()) return;
  if (c->kind() == Kind::If || c->kind() == Kind::While) out.push_back({c->label(), c->expr(), c2->expr()});
  if (c->first() && c2->first()) branchPoints(c->first(), c2->first(), out);
  if (c->second() && c2->second()) branchPoints(c->second(), c2->second(), out);
}

void requireTestAgreement(const std::vector<Branch>& bs, const std::function<Point(Label)>& point,
                          const Annotation& an, const Domain& dom) {
  for (const auto& b : bs) {
    const Point p = point(b.n);
    auto r = impliesBounded(an(p), bagree(b.e, b.e2), dom);
    if (!r.holds) {
      std::string detail = "an" + toString(p) + " does not imply " + toString(bagree(b.e, b.e2));
      if (r.witness) detail += "; witness " + describe(*r.witness, true);
      throw ExtractionRefused("test agreement at " + std::to_string(b.n), detail);
    }
  }
}

Point lck(Label n) { return Point::pair(n, n, Tag::Lck); }

// b ; dot(b') : {L(beg)+}{R(end)+} under SeqProd, with the left part built
// over subprograms of `left` and the right part over the dotted `right`.
struct SeqPart {
  Derivation derivation;
  std::vector<Judgment> family;
};

SeqPart seqProdPart(const Emit& em, const CommandPtr& b, const Command& left, Label leftFin, const CommandPtr& b2,
                    const CommandPtr& right, Label rightFin, const AtFn& atL, const AtFn& atR) {
  auto plusL = [&](Label n) { return encodePlus(atL(n)); };
  auto plusR = [&](Label n) { return encodePlus(atR(n)); };
  const CommandPtr leftWhole = std::make_shared<const Command>(left);
  const CommandPtr dRight = dotted(right);
  const CommandPtr db2 = dotted(b2);
  Floyd fl{em, leftWhole, leftFin, plusL};
  Floyd fr{em, dRight, rightFin, plusR};
  Derivation dl = fl.claim(b);
  Derivation dr = fr.claim(db2);
  const Formula pre = atL(lab(*b)), post = atR(elab(*b2, *right, rightFin));
  const CommandPtr prog = Command::seq(b, db2);
  Derivation seq = em.node(Rule::Seq, Judgment::unary(prog, dl.conclusion.pre, dr.conclusion.post), {dl, dr});
  SeqPart out;
  out.derivation = em.node(Rule::SeqProd, Judgment::rel(b, b2, pre, post), {std::move(seq)});
  out.family = floydFamily(b, left, leftFin, plusL);
  append(out.family, floydFamily(db2, *dRight, rightFin, plusR));
  addUnique(out.family, Judgment::unary(prog, encodePlus(pre), encodePlus(post)));
  addUnique(out.family, Judgment::rel(b, b2, pre, post));
  return out;
}

}  // namespace

Extraction extractFloyd(const Program& p, const Annotation& an, const Domain& dom) {
  if (!ok(p)) throw ExtractionRefused("ok program", "labels are not unique and non-negative");
  const Automaton a = autOf(p);
  Extraction x;
  x.theorem = Theorem::Floyd;
  x.domain = dom;
  x.vcs = validate(a, an, dom, false);
  Emit em{dom};
  AtFn at = [&](Label n) { return an(Point::unary(n)); };
  x.derivation = Floyd{em, p.body, p.fin, at}.claim(p.body);
  x.family = associatedJudgments(p, an);
  return x;
}

Extraction extractSeqProd(const Program& c, const Program& d, const Annotation& an, const Domain& dom) {
  if (!ok(c) || !ok(d)) throw ExtractionRefused("ok program", "labels are not unique and non-negative");
  const Automaton prod = buildProduct(c, d, ProductSpec::of(ProductKind::Sequential));
  Extraction x;
  x.theorem = Theorem::SeqProd;
  x.domain = dom;
  x.vcs = validate(prod, an, dom, true);
  Emit em{dom};
  const Label init2 = lab(*d.body);
  AtFn atL = [&](Label n) { return an(Point::pair(n, init2)); };
  AtFn atR = [&](Label n) { return an(Point::pair(c.fin, n)); };
  SeqPart part = seqProdPart(em, c.body, *c.body, c.fin, d.body, d.body, d.fin, atL, atR);
  x.derivation = std::move(part.derivation);
  x.family = std::move(part.family);
  return x;
}

namespace {

void requireSameShape(const Program& c, const Program& c2, bool relaxed, const char* what) {
  if (!ok(c) || !ok(c2)) throw ExtractionRefused("ok program", "labels are not unique and non-negative");
  if (c.fin != c2.fin) throw ExtractionRefused("same fin", "programs end at different labels");
  if (!sameCtl(*c.body, *c2.body, relaxed)) throw ExtractionRefused("sameCtl", std::string(what) + " needs same control");
  if (!choiceFree(*c.body) || !choiceFree(*c2.body)) throw ExtractionRefused("choice-free", "a program contains a choice");
}

}  // namespace

Extraction extractLockstep(const Program& c, const Program& c2, const Annotation& an, const Domain& dom, bool relaxed) {
  requireSameShape(c, c2, relaxed, "lockstep extraction");
  const Automaton prod = buildProduct(c, c2, ProductSpec::of(ProductKind::LockstepControl));
  Extraction x;
  x.theorem = Theorem::Lockstep;
  x.domain = dom;
  x.vcs = validate(prod, an, dom, false);
  std::vector<Branch> bs;
  branchPoints(c.body, c2.body, bs);
  requireTestAgreement(bs, [](Label n) { return Point::pair(n, n); }, an, dom);
  Emit em{dom};
  AtFn at = [&](Label n) { return an(Point::pair(n, n)); };
  x.derivation = Lockstep{em, c.body, c.fin, at, relaxed, nullptr}.claim(c.body, c2.body);
  lockFamily(c.body, c2.body, *c.body, c.fin, at, nullptr, x.family);
  return x;
}

Extraction extractLockstepSeq(const Program& c, const Program& c2, Label beg, Label end, const Annotation& an,
                              const Domain& dom) {
  if (!ok(c) || !ok(c2)) throw ExtractionRefused("ok program", "labels are not unique and non-negative");
  const SameExceptInfo info = sameExcept(c, c2, beg, end);
  if (!info.ok) throw ExtractionRefused("sameExcept: " + info.clause, info.reason);
  ProductSpec spec = ProductSpec::of(ProductKind::SameExcept);
  spec.beg = beg;
  spec.end = end;
  const Automaton prod = buildProduct(c, c2, spec);
  Extraction x;
  x.theorem = Theorem::LockstepSeq;
  x.domain = dom;
  x.vcs = validate(prod, an, dom, true);

  const auto inB = labs(*info.b), inB2 = labs(*info.b2);
  std::vector<Branch> all, outside;
  branchPoints(info.context, info.context2, all);
  for (const auto& b : all)
    if (!std::binary_search(inB.begin(), inB.end(), b.n) && !std::binary_search(inB2.begin(), inB2.end(), b.n))
      outside.push_back(b);
  requireTestAgreement(outside, lck, an, dom);

  Emit em{dom};
  AtFn at = [&](Label n) { return an(n == beg ? Point::pair(beg, beg, Tag::Lo) : lck(n)); };
  AtFn atL = [&](Label n) { return an(n == end ? Point::pair(end, beg, Tag::Ro) : Point::pair(n, beg, Tag::Lo)); };
  AtFn atR = [&](Label n) { return an(n == end ? lck(end) : Point::pair(end, n, Tag::Ro)); };
  auto isHole = [&](const CommandPtr& b, const CommandPtr& b2) { return *b == *info.b && *b2 == *info.b2; };
  std::optional<SeqPart> part;
  Special special = [&](const CommandPtr& b, const CommandPtr& b2) -> std::optional<Derivation> {
    if (!isHole(b, b2)) return std::nullopt;
    part = seqProdPart(em, b, *c.body, c.fin, b2, c2.body, c2.fin, atL, atR);
    return part->derivation;
  };
  x.derivation = Lockstep{em, c.body, c.fin, at, false, special}.claim(c.body, c2.body);
  if (!part) throw ExtractionRefused("sameExcept", "the replaced subprograms are not aligned by the contexts");
  lockFamily(c.body, c2.body, *c.body, c.fin, at, isHole, x.family);
  append(x.family, part->family);
  return x;
}

Extraction extractCaWhile(const Program& c, const Program& c2, Label beg, const Formula& lambda, const Formula& rho,
                          const Annotation& an, const Domain& dom) {
  requireSameShape(c, c2, false, "caWhile extraction");
  if (!hasLabel(*c.body, beg) || sub(beg, c.body)->kind() != Kind::While)
    throw ExtractionRefused("loop at beg", "sub(" + std::to_string(beg) + ", c) is not a loop");
  ProductSpec spec = ProductSpec::of(ProductKind::CaLoop);
  spec.beg = beg;
  spec.lambda = lambda;
  spec.rho = rho;
  const Automaton prod = buildProduct(c, c2, spec);
  Extraction x;
  x.theorem = Theorem::CaWhile;
  x.domain = dom;
  x.vcs = validate(prod, an, dom, false);

  std::vector<Branch> all, others;
  branchPoints(c.body, c2.body, all);
  const Branch* loop = nullptr;
  for (const auto& b : all) {
    if (b.n == beg)
      loop = &b;
    else
      others.push_back(b);
  }
  requireTestAgreement(others, lck, an, dom);
  const Formula Q = an(lck(beg));
  const Formula l = leftOf(loop->e), r = rightOf(loop->e2);
  const Formula cover = disj(disj(bagree(loop->e, loop->e2), conj(lambda, l)), conj(rho, r));
  if (auto res = impliesBounded(Q, cover, dom); !res.holds) {
    std::string detail = "an" + toString(lck(beg)) + " does not imply " + toString(cover);
    if (res.witness) detail += "; witness " + describe(*res.witness, true);
    throw ExtractionRefused("loop coverage at " + std::to_string(beg), detail);
  }

  Emit em{dom};
  const CommandPtr skip = Command::skip(beg);
  AtFn at = [&](Label n) { return an(lck(n)); };
  AtFn atLo = [&](Label n) { return an(n == beg ? lck(beg) : Point::pair(n, beg, Tag::Lo)); };
  AtFn atRo = [&](Label n) { return an(n == beg ? lck(beg) : Point::pair(beg, n, Tag::Ro)); };
  OneSided lo{em, c.body, c.fin, atLo, Side::Left, skip};
  OneSided ro{em, c2.body, c2.fin, atRo, Side::Right, skip};
  Lockstep lock{em, c.body, c.fin, at, false, nullptr};
  const CommandPtr w = sub(beg, c.body), w2 = sub(beg, c2.body);
  const Formula post = at(elab(*w, *c.body, c.fin));
  const Formula p1 = conj({Q, l, r, neg(lambda), neg(rho)}), p2 = conj({Q, lambda, l}), p3 = conj({Q, rho, r});
  const Formula exitQ = conj(conj(Q, neg(l)), neg(r));
  lock.special = [&](const CommandPtr& b, const CommandPtr& b2) -> std::optional<Derivation> {
    if (!(b->kind() == Kind::While && b->label() == beg)) return std::nullopt;
    std::vector<Derivation> ps;
    Lockstep inner = lock;
    inner.special = nullptr;
    ps.push_back(em.conseq(inner.claim(b->body(), b2->body()), p1, Q));
    ps.push_back(em.conseq(lo.claim(b->body()), p2, Q));
    ps.push_back(em.conseq(ro.claim(b2->body()), p3, Q));
    Derivation cw = em.node(Rule::CaWhile, Judgment::rel(b, b2, Q, exitQ), std::move(ps), {{Q, cover}});
    cw.lambda = lambda;
    cw.rho = rho;
    return em.conseq(std::move(cw), Q, post);
  };
  x.derivation = lock.claim(c.body, c2.body);

  auto isLoop = [&](const CommandPtr& b, const CommandPtr&) { return b->kind() == Kind::While && b->label() == beg; };
  lockFamily(c.body, c2.body, *c.body, c.fin, at, isLoop, x.family);
  lockFamily(w->body(), w2->body(), *c.body, c.fin, at, nullptr, x.family);
  oneSidedFamily(w->body(), *c.body, c.fin, atLo, Side::Left, skip, x.family);
  oneSidedFamily(w2->body(), *c2.body, c2.fin, atRo, Side::Right, skip, x.family);
  addUnique(x.family, Judgment::rel(w, w2, Q, exitQ));
  addUnique(x.family, Judgment::rel(w->body(), w2->body(), p1, Q));
  addUnique(x.family, Judgment::rel(w->body(), skip, p2, Q));
  addUnique(x.family, Judgment::rel(skip, w2->body(), p3, Q));
  return x;
}

namespace {

bool isInstance(const SideCondition& s, const std::vector<SideCondition>& vcs) {
  if (sameFormula(s.lhs, s.rhs)) return true;
  return std::any_of(vcs.begin(), vcs.end(),
                     [&](const SideCondition& v) { return sameFormula(v.lhs, s.lhs) && sameFormula(v.rhs, s.rhs); });
}

void auditNode(const Derivation& d, bool excused, const Extraction& x, AuditResult& out) {
  ++out.checked;
  if (excused) {
    ++out.glue;
  } else if (std::find(x.family.begin(), x.family.end(), d.conclusion) == x.family.end()) {
    out.ok = false;
    out.offending.push_back(std::string(ruleName(d.rule)) + ": " + toString(d.conclusion));
  }
  bool glue = d.rule == Rule::Conseq || d.rule == Rule::RConseq;
  for (const auto& s : d.sides) glue = glue && isInstance(s, x.vcs);
  if ((d.rule == Rule::Conseq || d.rule == Rule::RConseq) && !glue) {
    out.ok = false;
    out.offending.push_back(std::string(ruleName(d.rule)) + " with a non-VC implication: " + toString(d.conclusion));
  }
  for (const auto& p : d.premises) auditNode(p, glue, x, out);
}

}  // namespace

AuditResult auditExtraction(const Extraction& x) {
  AuditResult out;
  auditNode(x.derivation, false, x, out);
  return out;
}

}  // namespace alignv
