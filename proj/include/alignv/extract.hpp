#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alignv/annotation.hpp"
#include "alignv/logic.hpp"
#include "alignv/product.hpp"

namespace alignv {

enum class Theorem : std::uint8_t { Floyd, SeqProd, Lockstep, LockstepSeq, CaWhile };

const char* theoremName(Theorem t);
Theorem parseTheorem(const std::string& name);

// Raised when an extraction precondition fails; `hypothesis` names it
// (e.g. "valid annotation", "test agreement at 5", "sameExcept: ...").
class ExtractionRefused : public std::runtime_error {
 public:
  ExtractionRefused(std::string hypothesis, const std::string& detail)
      : std::runtime_error(hypothesis + ": " + detail), hypothesis_(std::move(hypothesis)) {}
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

struct Extraction {
  Theorem theorem = Theorem::Floyd;
  Derivation derivation;
  // Associated judgments of the annotation for this theorem.
  std::vector<Judgment> family;
  // VC implications of the annotated automaton (and their unary encodings
  // for sequential parts); Conseq/rConseq glue must use these.
  std::vector<SideCondition> vcs;
  Domain domain;
};

// Every extraction first checks that `an` is a full annotation of the
// theorem's automaton and that all its VCs hold over `dom`.

// Hoare-logic proof of c : {P}{Q} from an annotation of aut(c; skip^fin).
Extraction extractFloyd(const Program& p, const Annotation& an, const Domain& dom);

// SeqProd proof from an annotation of the sequential product.
Extraction extractSeqProd(const Program& c, const Program& d, const Annotation& an, const Domain& dom);

// Proof with the lockstep rules from an annotation of the lockstep-control
// product; `relaxed` lets assignments stand opposite skips.
Extraction extractLockstep(const Program& c, const Program& c2, const Annotation& an, const Domain& dom,
                           bool relaxed = false);

// Lockstep over the contexts with a SeqProd subproof for the replaced
// subprograms, from an annotation of the tagged sameExcept product.
Extraction extractLockstepSeq(const Program& c, const Program& c2, Label beg, Label end, const Annotation& an,
                              const Domain& dom);

// Lockstep proof with one caWhile node at beg, from an annotation of the
// conditionally aligned loop product.
Extraction extractCaWhile(const Program& c, const Program& c2, Label beg, const Formula& lambda, const Formula& rho,
                          const Annotation& an, const Domain& dom);

struct AuditResult {
  bool ok = true;
  std::size_t checked = 0;
  std::size_t glue = 0;  // premises excused as Conseq/rConseq glue
  std::vector<std::string> offending;
};

// Every conclusion is an associated judgment, except premises of
// Conseq/rConseq nodes whose implications are all VC instances or trivial.
AuditResult auditExtraction(const Extraction& x);

}  // namespace alignv
