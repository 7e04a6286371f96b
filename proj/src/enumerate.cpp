#include "alignv/enumerate.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>

namespace alignv {

namespace {

std::atomic<Exec> gExec{Exec::Parallel};
std::atomic<int> gCap{0};

int initialCap() {
  if (const char* env = std::getenv("ALIGN_VERIFY_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1, omp_get_max_threads());
}

}  // namespace

Exec defaultExec() { return gExec.load(); }
void setDefaultExec(Exec e) { gExec.store(e); }

int threadCap() {
  int c = gCap.load();
  if (c == 0) {
    c = initialCap();
    gCap.store(c);
  }
  return c;
}

void setThreadCap(int n) { gCap.store(n > 0 ? n : initialCap()); }

SearchPlan::SearchPlan(const std::vector<VarRef>& vars, const std::vector<Expr>& constraints, const Domain& dom)
    : dom_(dom) {
  if (dom.size() == 0) throw DomainError("empty domain " + toString(dom));
  std::vector<Expr> filters;
  std::vector<Expr> gens;
  for (const auto& c : constraints) {
    for (const auto& k : conjuncts(normalize(c))) {
      if (k.kind() == Expr::Kind::Lit) {
        if (k.value() == 0) feasible_ = false;
        continue;
      }
      (k.kind() == Expr::Kind::Set ? gens : filters).push_back(k);
    }
  }
  for (const auto& v : vars) slots_.add(v);
  std::set<VarRef> extra;
  for (const auto& c : filters) collectFreeVars(c, extra);
  for (const auto& c : gens) collectFreeVars(c, extra);
  for (const auto& v : extra) slots_.add(v);

  const std::size_t n = slots_.size();
  std::vector<int> levelOf(n, -1);
  std::stable_sort(gens.begin(), gens.end(), [](const Expr& a, const Expr& b) { return a.set().size() < b.set().size(); });
  for (const auto& g : gens) {
    Level lv;
    bool fresh = false;
    for (const auto& v : g.set().vars()) {
      int s = slots_.slotOf(v);
      lv.setSlots.push_back(s);
      lv.assigns.push_back(levelOf[s] < 0);
      fresh = fresh || levelOf[s] < 0;
    }
    if (!fresh) {
      filters.push_back(g);
      continue;
    }
    lv.rows = &g.set();
    keep_.push_back(g.setPtr());
    for (int s : lv.setSlots)
      if (levelOf[s] < 0) levelOf[s] = static_cast<int>(levels_.size());
    levels_.push_back(std::move(lv));
  }

  std::vector<std::vector<int>> filterSlots;
  for (const auto& f : filters) {
    std::vector<int> ss;
    for (const auto& v : freeVars(f)) ss.push_back(slots_.slotOf(v));
    filterSlots.push_back(std::move(ss));
  }
  auto pending = [&](std::size_t fi) {
    int k = 0;
    for (int s : filterSlots[fi]) k += levelOf[s] < 0;
    return k;
  };
  for (;;) {
    int bestSlot = -1;
    std::pair<int, int> bestScore{-1, -1};
    for (std::size_t s = 0; s < n; ++s) {
      if (levelOf[s] >= 0) continue;
      std::pair<int, int> score{0, 0};
      for (std::size_t fi = 0; fi < filters.size(); ++fi) {
        if (std::find(filterSlots[fi].begin(), filterSlots[fi].end(), static_cast<int>(s)) == filterSlots[fi].end())
          continue;
        ++score.second;
        if (pending(fi) == 1) ++score.first;
      }
      if (score > bestScore) {
        bestScore = score;
        bestSlot = static_cast<int>(s);
      }
    }
    if (bestSlot < 0) break;
    levelOf[bestSlot] = static_cast<int>(levels_.size());
    Level lv;
    lv.slot = bestSlot;
    levels_.push_back(std::move(lv));
  }

  std::vector<Value> zero(std::max<std::size_t>(n, 1), 0);
  for (std::size_t fi = 0; fi < filters.size(); ++fi) {
    int at = -1;
    for (int s : filterSlots[fi]) at = std::max(at, levelOf[s]);
    CompiledExpr ce(filters[fi], slots_);
    if (at < 0) {
      if (!ce.holds(zero.data())) feasible_ = false;
      continue;
    }
    levels_[at].filters.push_back(std::move(ce));
  }
}

std::size_t SearchPlan::firstLevelWidth() const {
  if (levels_.empty()) return 1;
  const Level& l = levels_.front();
  return l.rows ? l.rows->size() : dom_.size();
}

namespace {

class Walker {
 public:
  Walker(const SearchPlan& plan) : plan_(plan), lv_(plan.plan()), regs_(std::max<std::size_t>(plan.slots().size(), 1), 0) {}

  std::size_t width(std::size_t level) const {
    const auto& l = lv_[level];
    return l.rows ? l.rows->size() : plan_.domain().size();
  }

  // Applies choice i of `level` and runs that level's filters.
  bool choose(std::size_t level, std::size_t i) {
    const auto& l = lv_[level];
    if (l.rows) {
      auto row = l.rows->row(i);
      for (std::size_t c = 0; c < row.size(); ++c) {
        int s = l.setSlots[c];
        if (l.assigns[c])
          regs_[s] = row[c];
        else if (regs_[s] != row[c])
          return false;
      }
    } else {
      regs_[l.slot] = plan_.domain().lo + static_cast<Value>(i);
    }
    for (const auto& f : l.filters)
      if (!f.holds(regs_.data())) return false;
    return true;
  }

  // Depth-first search from `level`; true when `leaf` rejected a candidate,
  // which is then left in regs().
  bool reject(std::size_t level, const LeafFn& leaf) {
    if (level == lv_.size()) return !leaf(regs_.data());
    const std::size_t w = width(level);
    for (std::size_t i = 0; i < w; ++i)
      if (choose(level, i) && reject(level + 1, leaf)) return true;
    return false;
  }

  template <class F>
  void each(std::size_t level, F&& f) {
    if (level == lv_.size()) {
      f(regs_);
      return;
    }
    const std::size_t w = width(level);
    for (std::size_t i = 0; i < w; ++i)
      if (choose(level, i)) each(level + 1, f);
  }

  Assignment result() const { return Assignment(regs_.begin(), regs_.begin() + static_cast<long>(plan_.slots().size())); }

 private:
  const SearchPlan& plan_;
  const std::vector<SearchPlan::Level>& lv_;
  std::vector<Value> regs_;
};

class ErrorSlot {
 public:
  void capture() {
    std::lock_guard<std::mutex> g(m_);
    if (!err_) err_ = std::current_exception();
  }
  void rethrow() const {
    if (err_) std::rethrow_exception(err_);
  }

 private:
  std::mutex m_;
  std::exception_ptr err_;
};

}  // namespace

std::optional<Assignment> findViolationSerial(const SearchPlan& plan, const LeafFn& leaf) {
  if (!plan.feasible()) return std::nullopt;
  Walker w(plan);
  if (w.reject(0, leaf)) return w.result();
  return std::nullopt;
}

std::optional<Assignment> findViolationParallel(const SearchPlan& plan, const LeafFn& leaf) {
  if (!plan.feasible()) return std::nullopt;
  if (plan.levels() == 0 || threadCap() == 1) return findViolationSerial(plan, leaf);
  const auto width = static_cast<long>(plan.firstLevelWidth());
  std::atomic<long> best{std::numeric_limits<long>::max()};
  Assignment bestRegs;
  std::mutex m;
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCap())
  for (long i = 0; i < width; ++i) {
    if (i > best.load(std::memory_order_relaxed)) continue;
    try {
      Walker w(plan);
      if (w.choose(0, static_cast<std::size_t>(i)) && w.reject(1, leaf)) {
        std::lock_guard<std::mutex> g(m);
        if (i < best.load()) {
          best.store(i);
          bestRegs = w.result();
        }
      }
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  if (best.load() == std::numeric_limits<long>::max()) return std::nullopt;
  return bestRegs;
}

std::optional<Assignment> findViolation(const SearchPlan& plan, const LeafFn& leaf, Exec exec) {
  return exec == Exec::Serial ? findViolationSerial(plan, leaf) : findViolationParallel(plan, leaf);
}

std::vector<Assignment> collectSerial(const SearchPlan& plan) {
  std::vector<Assignment> out;
  if (!plan.feasible()) return out;
  const std::size_t n = plan.slots().size();
  Walker w(plan);
  w.each(0, [&](const std::vector<Value>& r) { out.emplace_back(r.begin(), r.begin() + static_cast<long>(n)); });
  return out;
}

std::vector<Assignment> collectParallel(const SearchPlan& plan) {
  if (!plan.feasible()) return {};
  if (plan.levels() == 0 || threadCap() == 1) return collectSerial(plan);
  const std::size_t n = plan.slots().size();
  const auto width = static_cast<long>(plan.firstLevelWidth());
  std::vector<std::vector<Assignment>> parts(static_cast<std::size_t>(width));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCap())
  for (long i = 0; i < width; ++i) {
    Walker w(plan);
    auto& part = parts[static_cast<std::size_t>(i)];
    if (w.choose(0, static_cast<std::size_t>(i)))
      w.each(1, [&](const std::vector<Value>& r) { part.emplace_back(r.begin(), r.begin() + static_cast<long>(n)); });
  }
  std::vector<Assignment> out;
  for (auto& p : parts)
    for (auto& a : p) out.push_back(std::move(a));
  return out;
}

std::vector<Assignment> collect(const SearchPlan& plan, Exec exec) {
  return exec == Exec::Serial ? collectSerial(plan) : collectParallel(plan);
}

std::size_t countSerial(const SearchPlan& plan) {
  if (!plan.feasible()) return 0;
  std::size_t k = 0;
  Walker w(plan);
  w.each(0, [&](const std::vector<Value>&) { ++k; });
  return k;
}

std::size_t countParallel(const SearchPlan& plan) {
  if (!plan.feasible()) return 0;
  if (plan.levels() == 0 || threadCap() == 1) return countSerial(plan);
  const auto width = static_cast<long>(plan.firstLevelWidth());
  std::size_t total = 0;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCap()) reduction(+ : total)
  for (long i = 0; i < width; ++i) {
    Walker w(plan);
    if (w.choose(0, static_cast<std::size_t>(i))) w.each(1, [&](const std::vector<Value>&) { ++total; });
  }
  return total;
}

void parallelFor(std::size_t n, const std::function<void(std::size_t)>& f, Exec exec) {
  if (exec == Exec::Serial || n < 2 || threadCap() == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  ErrorSlot err;
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threadCap())
  for (long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
}

}  // namespace alignv
