#include "alignv/semantics.hpp"

#include <algorithm>
#include <unordered_set>

namespace alignv {

std::vector<Configuration> step(const Configuration& k) {
  const Command& c = *k.cmd;
  const Env env{&k.store, nullptr};
  switch (c.kind()) {
    case Command::Kind::Skip:
      return {};
    case Command::Kind::Assign:
      return {{Command::skip(-c.label()), k.store.updated(c.target(), evaluate(c.expr(), env))}};
    case Command::Kind::Seq: {
      if (c.first()->kind() == Command::Kind::Skip) return {{c.second(), k.store}};
      std::vector<Configuration> out;
      for (auto& n : step({c.first(), k.store})) out.push_back({Command::seq(n.cmd, c.second()), std::move(n.store)});
      return out;
    }
    case Command::Kind::Choice:
      return {{c.first(), k.store}, {c.second(), k.store}};
    case Command::Kind::If:
      return {{truthy(c.expr(), env) ? c.first() : c.second(), k.store}};
    case Command::Kind::While:
      if (truthy(c.expr(), env)) return {{Command::seq(c.body(), k.cmd), k.store}};
      return {{Command::skip(-c.label()), k.store}};
  }
  return {};
}

RunOutcome runCommand(const CommandPtr& c, const Store& s0, std::size_t maxSteps) {
  RunOutcome out;
  std::vector<Configuration> frontier{{c, s0}};
  std::vector<Store> finals;
  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    // Paths that meet at the same depth are merged; revisits at other depths
    // are kept so that cycles run into the budget.
    std::unordered_set<Configuration> seen;
    std::vector<Configuration> next;
    for (const auto& k : frontier) {
      auto succ = step(k);
      if (succ.empty()) {
        finals.push_back(k.store);
        out.longest = std::max(out.longest, depth);
        continue;
      }
      if (depth == maxSteps) {
        out.diverged = true;
        continue;
      }
      for (auto& n : succ)
        if (seen.insert(n).second) next.push_back(std::move(n));
    }
    frontier = std::move(next);
  }
  std::sort(finals.begin(), finals.end());
  finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
  out.terminal = std::move(finals);
  return out;
}

RunOutcome run(const Program& p, const Store& s0, std::size_t maxSteps) {
  if (!ok(p)) throw DomainError("run: program is not ok (labels must be unique, non-negative, and differ from fin)");
  return runCommand(p.full(), s0, maxSteps);
}

namespace {

void extend(CmdTrace& prefix, std::size_t maxSteps, std::size_t maxTraces, std::vector<CmdTrace>& out) {
  auto succ = step(prefix.back());
  if (succ.empty() || prefix.size() > maxSteps) {
    if (out.size() >= maxTraces) throw DomainError("traces: more than " + std::to_string(maxTraces) + " traces");
    out.push_back(prefix);
    return;
  }
  for (auto& n : succ) {
    prefix.push_back(std::move(n));
    extend(prefix, maxSteps, maxTraces, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<CmdTrace> traces(const Configuration& k, std::size_t maxSteps, std::size_t maxTraces) {
  std::vector<CmdTrace> out;
  CmdTrace prefix{k};
  extend(prefix, maxSteps, maxTraces, out);
  return out;
}

}  // namespace alignv
