#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alignv/automaton.hpp"

namespace alignv {

// Outcome of one CLI pipeline. `verdict` is one of holds, fails,
// inconclusive, accepted, rejected, refused, ok or error; the exit code is a
// function of it alone.
struct Report {
  std::string command;
  // Everything needed to rerun the pipeline (file names, flags).
  std::vector<std::pair<std::string, std::string>> config;
  std::optional<Domain> domain;
  std::optional<std::size_t> maxSteps;
  std::string verdict = "ok";
  // Human-readable body, printed before the RESULT line.
  std::vector<std::string> lines;
  // Structured payload (witnesses, traces, VC lists, ...).
  nlohmann::json data = nlohmann::json::object();
  double seconds = 0;
  int threads = 1;
};

int exitCodeFor(const std::string& verdict);

enum class ReportFormat : std::uint8_t { Text, Json };

std::string emitReport(const Report& r, ReportFormat f);

nlohmann::json toJson(const Store& s);
nlohmann::json toJson(const Witness& w);
nlohmann::json toJson(const AutState& s, bool paired);
nlohmann::json toJson(const AutTrace& t, bool paired);
// Label/store sequence, one state per line.
std::vector<std::string> traceLines(const AutTrace& t, bool paired);

}  // namespace alignv
