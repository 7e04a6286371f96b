#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "alignv/compiled.hpp"
#include "alignv/expr.hpp"
#include "alignv/syntax.hpp"

namespace alignv {

// Bounded store enumeration. Every check in the toolkit that quantifies over
// stores goes through a SearchPlan and one of the two kernel families below:
// a serial reference implementation and an OpenMP implementation that splits
// the first search level across threads. Both visit candidates in the same
// order and return identical results.

enum class Exec : std::uint8_t { Serial, Parallel };

Exec defaultExec();
void setDefaultExec(Exec e);
// Upper bound on worker threads; initialised from ALIGN_VERIFY_THREADS.
int threadCap();
void setThreadCap(int n);

class SearchPlan {
 public:
  // Quantifies `vars` (plus any free variable of the constraints) over
  // `dom`, keeping only assignments that satisfy every constraint. A
  // constraint that is an extensional set is used as a generator: its rows
  // supply the values of its variables instead of the domain.
  SearchPlan(const std::vector<VarRef>& vars, const std::vector<Expr>& constraints, const Domain& dom);

  const SlotMap& slots() const { return slots_; }
  const Domain& domain() const { return dom_; }
  std::size_t levels() const { return levels_.size(); }
  // Number of choices at the first level (the unit of parallel work).
  std::size_t firstLevelWidth() const;
  // False when a constant constraint is already false.
  bool feasible() const { return feasible_; }

  struct Level {
    // Single variable ranging over the domain.
    int slot = -1;
    // Or: rows of an extensional set; column i assigns/validates slot setSlots[i].
    const StoreSet* rows = nullptr;
    std::vector<int> setSlots;
    std::vector<bool> assigns;
    std::vector<CompiledExpr> filters;
  };
  const std::vector<Level>& plan() const { return levels_; }

 private:
  SlotMap slots_;
  Domain dom_;
  std::vector<Level> levels_;
  std::vector<std::shared_ptr<const StoreSet>> keep_;
  bool feasible_ = true;
};

// Returns true to accept the candidate, false to report it.
using LeafFn = std::function<bool(const Value* regs)>;
using Assignment = std::vector<Value>;

std::optional<Assignment> findViolationSerial(const SearchPlan& plan, const LeafFn& leaf);
std::optional<Assignment> findViolationParallel(const SearchPlan& plan, const LeafFn& leaf);
std::optional<Assignment> findViolation(const SearchPlan& plan, const LeafFn& leaf, Exec exec = defaultExec());

std::vector<Assignment> collectSerial(const SearchPlan& plan);
std::vector<Assignment> collectParallel(const SearchPlan& plan);
std::vector<Assignment> collect(const SearchPlan& plan, Exec exec = defaultExec());

std::size_t countSerial(const SearchPlan& plan);
std::size_t countParallel(const SearchPlan& plan);

// Runs f(i) for i in [0, n); exceptions are rethrown on the calling thread.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& f, Exec exec = defaultExec());

}  // namespace alignv
