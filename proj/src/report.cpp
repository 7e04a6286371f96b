#include "alignv/report.hpp"

#include <map>

namespace alignv {

int exitCodeFor(const std::string& verdict) {
  static const std::map<std::string, int> codes = {
      {"holds", 0}, {"accepted", 0}, {"ok", 0},      {"fails", 1},
      {"rejected", 1}, {"refused", 1}, {"inconclusive", 3}, {"error", 2},
  };
  auto it = codes.find(verdict);
  return it == codes.end() ? 2 : it->second;
}

nlohmann::json toJson(const Store& s) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : s.bindings()) j[k] = v;
  return j;
}

nlohmann::json toJson(const Witness& w) { return {{"left", toJson(w.left)}, {"right", toJson(w.right)}}; }

nlohmann::json toJson(const AutState& s, bool paired) {
  nlohmann::json j = {{"ctrl", toString(s.ctrl)}};
  if (paired) {
    j["left"] = toJson(s.left);
    j["right"] = toJson(s.right);
  } else {
    j["store"] = toJson(s.left);
  }
  return j;
}

nlohmann::json toJson(const AutTrace& t, bool paired) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : t) j.push_back(toJson(s, paired));
  return j;
}

std::vector<std::string> traceLines(const AutTrace& t, bool paired) {
  std::vector<std::string> out;
  for (const auto& s : t) out.push_back("  " + toString(s, paired));
  return out;
}

std::string emitReport(const Report& r, ReportFormat f) {
  if (f == ReportFormat::Json) {
    nlohmann::json j;
    j["command"] = r.command;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : r.config) cfg[k] = v;
    j["config"] = cfg;
    if (r.domain) j["domain"] = {{"lo", r.domain->lo}, {"hi", r.domain->hi}};
    if (r.maxSteps) j["max_steps"] = *r.maxSteps;
    j["verdict"] = r.verdict;
    j["exit_code"] = exitCodeFor(r.verdict);
    j["data"] = r.data;
    j["lines"] = r.lines;
    j["seconds"] = r.seconds;
    j["threads"] = r.threads;
    return j.dump(2) + "\n";
  }
  std::string out;
  for (const auto& l : r.lines) out += l + "\n";
  if (r.maxSteps) out += "max-steps: " + std::to_string(*r.maxSteps) + "\n";
  out += "RESULT: " + r.verdict;
  if (r.domain) out += " (domain " + toString(*r.domain) + ")";
  return out + "\n";
}

}  // namespace alignv
