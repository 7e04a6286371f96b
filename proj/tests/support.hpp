#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "alignv/annotation.hpp"
#include "alignv/product.hpp"

namespace testing {

inline std::string corpusPath(const std::string& name) { return std::string(ALIGNV_CORPUS_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline alignv::Program corpus(const std::string& name) { return alignv::parseProgram(slurp(corpusPath(name))); }

inline alignv::Formula rel(const std::string& text) {
  return alignv::parseFormula(text, alignv::FormulaMode::Relational);
}
inline alignv::Formula una(const std::string& text) { return alignv::parseFormula(text, alignv::FormulaMode::Unary); }

struct LoadedAnnotation {
  alignv::Annotation an;
  std::optional<alignv::Domain> dom;
};

inline LoadedAnnotation loadAnnotation(const alignv::Automaton& a, const std::string& name, bool full) {
  auto f = alignv::parseAnnotationFile(slurp(corpusPath(name)),
                                       a.paired() ? alignv::FormulaMode::Relational : alignv::FormulaMode::Unary);
  std::map<alignv::Point, alignv::Formula> at;
  for (const auto& [p, e] : f.entries) at.insert_or_assign(p, alignv::Formula(e));
  return {alignv::Annotation(a, alignv::Formula(*f.pre), alignv::Formula(*f.post), at, full), f.domain};
}

inline alignv::ProductSpec caLoopSpec(alignv::Label beg) {
  auto s = alignv::ProductSpec::of(alignv::ProductKind::CaLoop);
  s.beg = beg;
  s.lambda = rel(slurp(corpusPath("c4c5_L.frm")));
  s.rho = rel(slurp(corpusPath("c4c5_R.frm")));
  return s;
}

inline alignv::Point P(int n) { return alignv::Point::unary(n); }

// Every .imp file in the corpus.
inline std::vector<std::string> corpusPrograms() {
  return {"c0.imp",       "c2.imp",   "c4.imp",         "c5.imp",          "cif.imp",   "mono.imp",
          "choice_inc.imp", "choice_y.imp", "hole_left.imp", "hole_right.imp", "loop2.imp", "loop3.imp",
          "swap.imp",     "skip.imp", "sum.imp"};
}

}  // namespace testing
