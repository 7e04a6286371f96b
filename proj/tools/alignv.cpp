#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "alignv/annotation.hpp"
#include "alignv/extract.hpp"
#include "alignv/product.hpp"
#include "alignv/report.hpp"
#include "alignv/sexpr.hpp"

using namespace alignv;

namespace {

// A product or theorem precondition that the inputs violate; reported as
// "rejected". Other exceptions (unreadable files, syntax errors) are "error".
struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string left, right;
  std::string domain;
  std::size_t maxSteps = 10000;
  std::size_t maxLen = 64;
  bool json = false;
  bool serial = false;
  std::string kind;
  std::string guards;
  std::string ann;
  bool full = false;
  std::string pre, post;
  std::string store;
  std::string cutset;
  std::string dot;
  std::string mode = "enum";
  std::string theorem;
  std::string hole;
  Label loop = -1;
  bool relaxed = false;
  std::string out;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Program loadProgram(const std::string& path) {
  try {
    return parseProgram(readFile(path));
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ":" + e.what());
  }
}

std::vector<std::string> splitComma(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Label toLabel(const std::string& s) {
  std::size_t used = 0;
  int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad label " + s);
  return v;
}

std::string describe(const Witness& w, bool paired) {
  return paired ? toString(w.left) + " | " + toString(w.right) : toString(w.left);
}

class Pipeline {
 public:
  Pipeline(std::string command, Options o) : o_(std::move(o)) {
    r_.command = std::move(command);
    if (!o_.left.empty()) r_.config.emplace_back("left", o_.left);
    if (!o_.right.empty()) r_.config.emplace_back("right", o_.right);
    for (const auto& [k, v] : std::vector<std::pair<std::string, std::string>>{
             {"kind", o_.kind}, {"guards", o_.guards}, {"ann", o_.ann}, {"pre", o_.pre}, {"post", o_.post},
             {"store", o_.store}, {"cutset", o_.cutset}, {"theorem", o_.theorem}, {"hole", o_.hole},
             {"out", o_.out}, {"domain", o_.domain}})
      if (!v.empty()) r_.config.emplace_back(k, v);
    if (r_.command == "check") r_.config.emplace_back("mode", o_.mode);
    if (o_.full) r_.config.emplace_back("full", "true");
    if (o_.relaxed) r_.config.emplace_back("relaxed", "true");
    if (o_.loop >= 0) r_.config.emplace_back("loop", std::to_string(o_.loop));
    exec_ = o_.serial ? Exec::Serial : defaultExec();
    r_.threads = o_.serial ? 1 : threadCap();
  }

  int run(const std::function<void(Pipeline&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(*this);
    } catch (const Rejected& e) {
      r_.verdict = "rejected";
      r_.lines.push_back(std::string("rejected: ") + e.what());
    } catch (const std::exception& e) {
      r_.verdict = "error";
      r_.lines.push_back(std::string("error: ") + e.what());
      r_.data["error"] = e.what();
    }
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << emitReport(r_, o_.json ? ReportFormat::Json : ReportFormat::Text);
    return exitCodeFor(r_.verdict);
  }

  Report& report() { return r_; }
  const Options& opts() const { return o_; }
  Exec exec() const { return exec_; }

  // --domain wins over a domain: line in the annotation, which wins over
  // the default.
  Domain domain(const std::optional<Domain>& fromFile = std::nullopt) {
    Domain d = !o_.domain.empty() ? parseDomain(o_.domain) : fromFile.value_or(Domain{});
    r_.domain = d;
    return d;
  }
  std::size_t steps() {
    r_.maxSteps = o_.maxSteps;
    return o_.maxSteps;
  }

  Program left() const { return loadProgram(o_.left); }
  Program right() const {
    if (o_.right.empty()) throw std::runtime_error("a right program is required");
    return loadProgram(o_.right);
  }

  ProductSpec spec(const std::string& kind) const {
    ProductSpec s = parseProductKind(kind);
    if (!o_.guards.empty()) {
      auto files = splitComma(o_.guards);
      if (files.size() != 2) throw std::runtime_error("--guards expects L.frm,R.frm");
      s.lambda = parseFormula(readFile(files[0]), FormulaMode::Relational);
      s.rho = parseFormula(readFile(files[1]), FormulaMode::Relational);
    } else if (s.kind == ProductKind::CaLoop) {
      throw std::runtime_error("caloop needs --guards L.frm,R.frm");
    }
    return s;
  }

  // The program automaton, or the product named by --kind.
  Automaton automaton() const {
    if (o_.kind.empty()) {
      if (!o_.right.empty()) throw std::runtime_error("two programs need --kind");
      return autOf(left());
    }
    try {
      return buildProduct(left(), right(), spec(o_.kind));
    } catch (const DomainError& e) {
      throw Rejected(e.what());
    }
  }

  struct Loaded {
    Annotation an;
    std::optional<Domain> dom;
  };

  Loaded annotation(const Automaton& a, bool full) const {
    if (o_.ann.empty()) throw std::runtime_error("--ann is required");
    AnnotationFile f;
    try {
      f = parseAnnotationFile(readFile(o_.ann), a.paired() ? FormulaMode::Relational : FormulaMode::Unary);
    } catch (const ParseError& e) {
      throw std::runtime_error(o_.ann + ":" + e.what());
    }
    if (!f.pre || !f.post) throw std::runtime_error(o_.ann + ": needs both pre: and post: lines");
    std::map<Point, Formula> at;
    for (const auto& [p, e] : f.entries) at.insert_or_assign(p, Formula(e));
    return {Annotation(a, Formula(*f.pre), Formula(*f.post), std::move(at), full), f.domain};
  }

  // Formula text, or the name of a file holding it.
  Formula formula(const std::string& text, bool relational, const char* what) const {
    if (text.empty()) throw std::runtime_error(std::string("--") + what + " is required");
    const std::string src = std::filesystem::is_regular_file(text) ? readFile(text) : text;
    return parseFormula(src, relational ? FormulaMode::Relational : FormulaMode::Unary);
  }

  void witness(const std::string& label, const Witness& w, bool paired) {
    r_.lines.push_back(label + ": " + describe(w, paired));
    r_.data[label] = toJson(w);
  }

  void trace(const std::string& label, const AutTrace& t, bool paired) {
    r_.lines.push_back(label + ":");
    for (auto& l : traceLines(t, paired)) r_.lines.push_back(std::move(l));
    r_.data[label] = toJson(t, paired);
  }

  void dot(const Cfg& g, const Point& init, const std::string& name) {
    if (o_.dot.empty()) return;
    const std::string text = toDot(g, init, name);
    if (o_.dot == "-") {
      r_.lines.push_back(text);
    } else {
      writeFile(o_.dot, text);
      r_.lines.push_back("dot: " + o_.dot);
    }
  }

 private:
  Options o_;
  Report r_;
  Exec exec_ = Exec::Parallel;
};

Store parseStore(const std::string& text) {
  Store s;
  for (const auto& item : splitComma(text)) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--store expects x=1,y=2");
    auto trim = [](std::string v) {
      v.erase(0, v.find_first_not_of(" \t"));
      v.erase(v.find_last_not_of(" \t") + 1);
      return v;
    };
    s.set(trim(item.substr(0, eq)), std::stoll(trim(item.substr(eq + 1))));
  }
  return s;
}

void cmdParse(Pipeline& p) {
  Program prog = p.left();
  std::istringstream text(prettyPrint(prog));
  for (std::string line; std::getline(text, line);) p.report().lines.push_back(line);
  p.report().data["fin"] = prog.fin;
  p.report().data["labels"] = labs(*prog.body);
  p.report().data["program"] = toString(*prog.body);
}

void cmdRun(Pipeline& p) {
  Program prog = p.left();
  const std::size_t steps = p.steps();
  RunOutcome out = run(prog, parseStore(p.opts().store), steps);
  auto& r = p.report();
  r.data["final"] = nlohmann::json::array();
  for (const auto& s : out.terminal) {
    r.lines.push_back("final: " + toString(s));
    r.data["final"].push_back(toJson(s));
  }
  r.data["longest"] = out.longest;
  r.data["budget_exhausted"] = out.diverged;
  if (out.diverged) {
    r.lines.push_back("budget exhausted: some path is still running after " + std::to_string(steps) + " steps");
    r.verdict = "inconclusive";
  }
}

void cmdCfg(Pipeline& p) {
  Program prog = p.left();
  Automaton a = autOf(prog);
  Cfg g = cfgOf(a);
  auto& r = p.report();
  r.data["edges"] = nlohmann::json::array();
  for (const auto& [from, to] : g.edges) {
    r.lines.push_back(toString(from) + " -> " + toString(to));
    r.data["edges"].push_back({toString(from), toString(to)});
  }
  if (!p.opts().cutset.empty()) {
    std::set<Point> k;
    for (const auto& n : splitComma(p.opts().cutset)) k.insert(Point::unary(toLabel(n)));
    CutsetCheck c = validateCutset(g, a.init(), a.fin(), k);
    if (!c.ok) {
      r.verdict = "fails";
      r.lines.push_back("invalid cutset: " + c.reason);
      if (!c.cycle.empty()) r.lines.push_back("uncut cycle: " + toString(c.cycle));
      r.data["cycle"] = toString(c.cycle);
    } else {
      r.data["segments"] = nlohmann::json::array();
      for (const auto& s : segments(g, a.init(), a.fin(), k)) {
        r.lines.push_back("segment " + toString(s));
        r.data["segments"].push_back(toString(s));
      }
    }
  }
  p.dot(g, a.init(), "cfg");
}

void cmdProduct(Pipeline& p) {
  if (p.opts().kind.empty()) throw std::runtime_error("--kind is required");
  Automaton a = p.automaton();
  auto& r = p.report();
  r.lines.push_back("controls: " + std::to_string(a.controls().size()));
  r.lines.push_back("transitions: " + std::to_string(a.transitions().size()));
  r.data["controls"] = a.controls().size();
  r.data["transitions"] = nlohmann::json::array();
  for (const auto& t : a.transitions()) {
    r.lines.push_back("  " + toString(t.from) + " -> " + toString(t.to) + " [" + t.kind + "] " +
                      toFormulaString(t.guard));
    r.data["transitions"].push_back(
        {{"from", toString(t.from)}, {"to", toString(t.to)}, {"kind", t.kind}, {"guard", toFormulaString(t.guard)}});
  }
  p.dot(cfgOf(a, p.domain()), a.init(), "product");
}

void cmdAdequacy(Pipeline& p) {
  if (p.opts().kind.empty()) throw std::runtime_error("--kind is required");
  Automaton prod = p.automaton();
  Automaton a = autOf(p.left()), b = autOf(p.right());
  Formula pre = p.formula(p.opts().pre, true, "pre");
  AdequacyResult res = checkAdequacy(prod, a, b, pre, p.domain(), p.opts().maxLen, p.exec());
  p.report().data["max_len"] = p.opts().maxLen;
  auto& r = p.report();
  r.data["pairs"] = res.pairs;
  r.lines.push_back("trace pairs examined: " + std::to_string(res.pairs));
  if (!res.note.empty()) r.lines.push_back(res.note);
  switch (res.verdict) {
    case Verdict::Holds: r.verdict = "holds"; break;
    case Verdict::Inconclusive: r.verdict = "inconclusive"; break;
    case Verdict::Fails:
      r.verdict = "fails";
      r.lines.push_back("uncovered pair of terminated traces");
      if (res.left) p.trace("left", *res.left, false);
      if (res.right) p.trace("right", *res.right, false);
      break;
  }
}

void cmdVcgen(Pipeline& p) {
  Automaton a = p.automaton();
  auto loaded = p.annotation(a, p.opts().full);
  auto& r = p.report();
  r.data["vcs"] = nlohmann::json::array();
  for (const auto& vc : genVCs(a, loaded.an)) {
    r.lines.push_back(toString(vc.segment) + ": " + vc.rendered);
    r.data["vcs"].push_back({{"segment", toString(vc.segment)},
                             {"kind", vc.kind},
                             {"rendered", vc.rendered},
                             {"lhs", toString(vc.lhs)},
                             {"rhs", toString(vc.rhs)}});
  }
}

void cmdCheck(Pipeline& p) {
  Automaton a = p.automaton();
  auto loaded = p.annotation(a, p.opts().full);
  const Domain dom = p.domain(loaded.dom);
  auto& r = p.report();
  if (p.opts().mode == "reach") {
    CheckResult c = checkReach(a, loaded.an, dom, p.steps(), p.exec());
    r.verdict = verdictName(c.verdict);
    if (!c.note.empty()) r.lines.push_back(c.note);
    if (c.trace) p.trace("trace", *c.trace, a.paired());
    return;
  }
  if (p.opts().mode != "enum") throw std::runtime_error("--mode is enum or reach");
  auto results = checkVCs(a, loaded.an, dom, p.exec());
  r.lines.push_back("verification conditions: " + std::to_string(results.size()));
  r.data["vcs"] = results.size();
  for (const auto& vr : results) {
    if (vr.verdict == Verdict::Holds) continue;
    r.verdict = "fails";
    r.lines.push_back("failing segment " + toString(vr.vc.segment) + ": " + vr.vc.rendered);
    r.data["segment"] = toString(vr.vc.segment);
    r.data["vc"] = vr.vc.rendered;
    if (vr.witness) p.witness("witness", *vr.witness, a.paired());
    return;
  }
  r.verdict = "holds";
}

void cmdExtend(Pipeline& p) {
  Automaton a = p.automaton();
  auto loaded = p.annotation(a, false);
  const Domain dom = p.domain(loaded.dom);
  Annotation full = extendFull(a, loaded.an, dom, p.exec());
  AnnotationFile f;
  f.pre = full.pre().expr();
  f.post = full.post().expr();
  f.domain = dom;
  for (const auto& [pt, fm] : full.entries())
    if (pt != a.init() && pt != a.fin()) f.entries.emplace_back(pt, fm.expr());
  const std::string text = formatAnnotationFile(f);
  if (p.opts().out.empty() || p.opts().out == "-") {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) p.report().lines.push_back(line);
  } else {
    writeFile(p.opts().out, text);
    p.report().lines.push_back("wrote " + std::to_string(f.entries.size()) + " entries to " + p.opts().out);
  }
  p.report().data["entries"] = f.entries.size();
}

void cmdVerify(Pipeline& p) {
  Automaton a = autOf(p.left());
  CheckResult c = satisfiesBounded(a, p.formula(p.opts().pre, false, "pre"), p.formula(p.opts().post, false, "post"),
                                   p.domain(), p.steps(), p.exec());
  auto& r = p.report();
  r.verdict = verdictName(c.verdict);
  if (!c.note.empty()) r.lines.push_back(c.note);
  if (c.trace) p.trace("trace", *c.trace, false);
}

void cmdVerifyRel(Pipeline& p) {
  const Formula pre = p.formula(p.opts().pre, true, "pre");
  const Formula post = p.formula(p.opts().post, true, "post");
  const Domain dom = p.domain();
  auto& r = p.report();
  if (!p.opts().kind.empty()) {
    CheckResult c = satisfiesBounded(p.automaton(), pre, post, dom, p.steps(), p.exec());
    r.verdict = verdictName(c.verdict);
    if (!c.note.empty()) r.lines.push_back(c.note);
    if (c.trace) p.trace("trace", *c.trace, true);
    return;
  }
  RelResult res = relSatisfiesBounded(autOf(p.left()), autOf(p.right()), pre, post, dom, p.steps(), p.exec());
  r.verdict = verdictName(res.verdict);
  if (!res.note.empty()) r.lines.push_back(res.note);
  if (res.initial) p.witness("initial", *res.initial, true);
  if (res.final) p.witness("final", *res.final, true);
}

Label firstLoop(const Command& c) {
  switch (c.kind()) {
    case Command::Kind::While: return c.label();
    case Command::Kind::Seq:
    case Command::Kind::If:
    case Command::Kind::Choice: {
      Label n = firstLoop(*c.first());
      return n >= 0 ? n : firstLoop(*c.second());
    }
    default: return -1;
  }
}

void cmdExtract(Pipeline& p) {
  const Options& o = p.opts();
  const Theorem th = parseTheorem(o.theorem);
  Program c = p.left();
  auto& r = p.report();
  auto annotate = [&](const Automaton& a) {
    auto loaded = p.annotation(a, true);
    return std::make_pair(loaded.an, p.domain(loaded.dom));
  };
  try {
    Extraction x;
    switch (th) {
      case Theorem::Floyd: {
        auto [an, dom] = annotate(autOf(c));
        x = extractFloyd(c, an, dom);
        break;
      }
      case Theorem::SeqProd: {
        Program d = p.right();
        auto [an, dom] = annotate(buildProduct(c, d, ProductSpec::of(ProductKind::Sequential)));
        x = extractSeqProd(c, d, an, dom);
        break;
      }
      case Theorem::Lockstep: {
        Program d = p.right();
        auto [an, dom] = annotate(buildProduct(c, d, ProductSpec::of(ProductKind::LockstepControl)));
        x = extractLockstep(c, d, an, dom, o.relaxed);
        break;
      }
      case Theorem::LockstepSeq: {
        Program d = p.right();
        auto parts = splitComma(o.hole);
        if (parts.size() != 2) throw std::runtime_error("lockstep-seq needs --hole BEG,END");
        ProductSpec s = ProductSpec::of(ProductKind::SameExcept);
        s.beg = toLabel(parts[0]);
        s.end = toLabel(parts[1]);
        auto [an, dom] = annotate(buildProduct(c, d, s));
        x = extractLockstepSeq(c, d, s.beg, s.end, an, dom);
        break;
      }
      case Theorem::CaWhile: {
        Program d = p.right();
        const Label beg = o.loop >= 0 ? o.loop : firstLoop(*c.body);
        if (beg < 0) throw std::runtime_error("cawhile needs a loop (--loop BEG)");
        ProductSpec s = p.spec("caloop:" + std::to_string(beg));
        auto [an, dom] = annotate(buildProduct(c, d, s));
        x = extractCaWhile(c, d, beg, s.lambda, s.rho, an, dom);
        break;
      }
    }
    const std::string text = writeDerivation(x.derivation);
    AuditResult audit = auditExtraction(x);
    r.lines.push_back("theorem: " + std::string(theoremName(th)));
    r.lines.push_back("conclusion: " + toString(x.derivation.conclusion));
    r.lines.push_back("nodes: " + std::to_string(countNodes(x.derivation)));
    r.lines.push_back("audit: " + std::string(audit.ok ? "ok" : "failed") + " (" + std::to_string(audit.checked) +
                      " judgments, " + std::to_string(audit.glue) + " glue premises)");
    for (const auto& off : audit.offending) r.lines.push_back("  not associated: " + off);
    r.data["nodes"] = countNodes(x.derivation);
    r.data["audit_ok"] = audit.ok;
    r.data["conclusion"] = toString(x.derivation.conclusion);
    if (o.out.empty() || o.out == "-") {
      r.lines.push_back(text);
    } else {
      writeFile(o.out, text);
      r.lines.push_back("wrote " + o.out);
    }
    r.verdict = audit.ok ? "ok" : "error";
  } catch (const ExtractionRefused& e) {
    r.verdict = "refused";
    r.lines.push_back(std::string("refused: ") + e.what());
    r.data["hypothesis"] = e.hypothesis();
  } catch (const DomainError& e) {
    throw Rejected(e.what());
  }
}

void cmdCheckDeriv(Pipeline& p) {
  Derivation d;
  try {
    d = readDerivation(readFile(p.opts().left));
  } catch (const ParseError& e) {
    throw std::runtime_error(p.opts().left + ":" + e.what());
  }
  std::optional<Domain> dom;
  if (!p.opts().domain.empty()) dom = p.domain();
  DerivCheck c = checkDerivation(d, dom, p.exec());
  auto& r = p.report();
  r.lines.push_back("nodes: " + std::to_string(countNodes(d)));
  r.lines.push_back("conclusion: " + toString(d.conclusion));
  if (c.accepted) {
    r.verdict = "accepted";
    return;
  }
  r.verdict = "rejected";
  r.lines.push_back("node: " + c.where());
  r.lines.push_back("rule: " + c.rule);
  r.lines.push_back("reason: " + c.reason);
  r.data["node"] = c.where();
  r.data["rule"] = c.rule;
  r.data["reason"] = c.reason;
  if (c.witness) p.witness("witness", *c.witness, d.conclusion.relational);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alignv: bounded relational verification, product automata and proof extraction"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* s) {
    s->add_option("--domain", o.domain, "bounded domain lo..hi (default -8..8)");
    s->add_option("--max-steps", o.maxSteps, "step budget per execution (default 10000)");
    s->add_flag("--json", o.json, "emit a JSON report");
    s->add_flag("--serial", o.serial, "use the serial reference kernels");
  };
  auto oneProgram = [&](CLI::App* s) { s->add_option("program", o.left, "program (.imp)")->required(); };
  auto twoPrograms = [&](CLI::App* s, bool rightRequired) {
    s->add_option("left", o.left, "left program (.imp)")->required();
    auto* r = s->add_option("right", o.right, "right program (.imp)");
    if (rightRequired) r->required();
  };
  auto productOpts = [&](CLI::App* s) {
    s->add_option("--kind", o.kind, "product: seq|elck|olck|lckctl|ilv|lo|ro|dov|sameexcept:B,E|caloop:B");
    s->add_option("--guards", o.guards, "L.frm,R.frm one-sided loop guards for caloop");
  };

  struct Sub {
    const char* name;
    void (*fn)(Pipeline&);
  };
  std::vector<std::pair<CLI::App*, Sub>> subs;
  auto add = [&](const char* name, const char* help, void (*fn)(Pipeline&)) {
    CLI::App* s = app.add_subcommand(name, help);
    common(s);
    subs.push_back({s, {name, fn}});
    return s;
  };

  auto* parse = add("parse", "parse and print a labelled program", cmdParse);
  oneProgram(parse);

  auto* runCmd = add("run", "execute a program on one store", cmdRun);
  oneProgram(runCmd);
  runCmd->add_option("--store", o.store, "initial store, e.g. x=4,y=0");

  auto* cfg = add("cfg", "control-flow graph and segments", cmdCfg);
  oneProgram(cfg);
  cfg->add_option("--cutset", o.cutset, "cutpoints, e.g. 1,3,6");
  cfg->add_flag("--dot{-}", o.dot, "emit DOT (--dot=FILE writes a file)");

  auto* product = add("product", "build a product automaton", cmdProduct);
  twoPrograms(product, true);
  productOpts(product);
  product->add_flag("--dot{-}", o.dot, "emit DOT (--dot=FILE writes a file)");

  auto* adequacy = add("adequacy", "bounded R-adequacy of a product", cmdAdequacy);
  twoPrograms(adequacy, true);
  productOpts(adequacy);
  adequacy->add_option("--pre", o.pre, "relational precondition R (text or file)")->required();
  adequacy->add_option("--max-len", o.maxLen, "longest trace considered, in steps (default 64)");

  auto* vcgen = add("vcgen", "list verification conditions", cmdVcgen);
  twoPrograms(vcgen, false);
  productOpts(vcgen);
  vcgen->add_option("--ann", o.ann, "annotation file")->required();
  vcgen->add_flag("--full", o.full, "every control point is a cutpoint; missing ones read false");

  auto* check = add("check", "check an annotation's verification conditions", cmdCheck);
  twoPrograms(check, false);
  productOpts(check);
  check->add_option("--ann", o.ann, "annotation file")->required();
  check->add_flag("--full", o.full, "every control point is a cutpoint; missing ones read false");
  check->add_option("--mode", o.mode, "enum (decide VCs) or reach (bounded traces)");

  auto* extend = add("extend", "extend an annotation to every control point", cmdExtend);
  twoPrograms(extend, false);
  productOpts(extend);
  extend->add_option("--ann", o.ann, "annotation file")->required();
  extend->add_option("-o,--out", o.out, "output annotation file");

  auto* verify = add("verify", "bounded check of c : {P}{Q}", cmdVerify);
  oneProgram(verify);
  verify->add_option("--pre", o.pre, "precondition (text or file)")->required();
  verify->add_option("--post", o.post, "postcondition (text or file)")->required();

  auto* verifyRel = add("verify-rel", "bounded check of c | c' : <R><S>", cmdVerifyRel);
  twoPrograms(verifyRel, true);
  productOpts(verifyRel);
  verifyRel->add_option("--pre", o.pre, "relational precondition (text or file)")->required();
  verifyRel->add_option("--post", o.post, "relational postcondition (text or file)")->required();

  auto* extract = add("extract", "extract a derivation from a valid full annotation", cmdExtract);
  twoPrograms(extract, false);
  extract->add_option("--theorem", o.theorem, "floyd|seqprod|lockstep|lockstep-seq|cawhile")->required();
  extract->add_option("--ann", o.ann, "full annotation of the theorem's automaton")->required();
  extract->add_option("--hole", o.hole, "BEG,END of the replaced subprograms (lockstep-seq)");
  extract->add_option("--guards", o.guards, "L.frm,R.frm (cawhile)");
  extract->add_option("--loop", o.loop, "label of the aligned loop (cawhile; default: first loop)");
  extract->add_flag("--relaxed", o.relaxed, "allow assignments opposite skips (lockstep)");
  extract->add_option("-o,--out", o.out, "derivation file");

  auto* checkDeriv = add("check-deriv", "check a derivation file", cmdCheckDeriv);
  checkDeriv->add_option("derivation", o.left, "derivation (.sexp)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto& [s, sub] : subs)
    if (s->parsed()) return Pipeline(sub.name, o).run(sub.fn);
  return 2;
}
