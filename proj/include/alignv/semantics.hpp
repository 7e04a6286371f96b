#pragma once

#include <cstddef>
#include <vector>

#include "alignv/lang.hpp"
#include "alignv/store.hpp"

namespace alignv {

struct Configuration {
  CommandPtr cmd;
  Store store;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.store == b.store && sameCommand(a.cmd, b.cmd);
  }
};

using CmdTrace = std::vector<Configuration>;

// Transition relation on configurations: empty iff the command is a lone skip.
std::vector<Configuration> step(const Configuration& k);

struct RunOutcome {
  // Distinct final stores, sorted.
  std::vector<Store> terminal;
  // Some path still had steps left when the budget ran out.
  bool diverged = false;
  // Length of the longest terminated path, in steps.
  std::size_t longest = 0;

  bool terminated() const { return !diverged; }
};

// Breadth-first exploration of every execution path up to `maxSteps` steps.
RunOutcome run(const Program& p, const Store& s0, std::size_t maxSteps);
RunOutcome runCommand(const CommandPtr& c, const Store& s0, std::size_t maxSteps);

// All maximal traces from `k`, truncated at `maxSteps` steps each; throws
// DomainError when more than `maxTraces` traces exist.
std::vector<CmdTrace> traces(const Configuration& k, std::size_t maxSteps, std::size_t maxTraces = 4096);

}  // namespace alignv

template <>
struct std::hash<alignv::Configuration> {
  std::size_t operator()(const alignv::Configuration& k) const noexcept {
    return alignv::hashCombine(k.cmd->hash(), k.store.hash());
  }
};
