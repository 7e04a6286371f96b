#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "alignv/expr.hpp"

namespace alignv {

// Dense numbering of variables used by the enumeration kernels.
class SlotMap {
 public:
  SlotMap() = default;
  explicit SlotMap(const std::vector<VarRef>& vars) {
    for (const auto& v : vars) add(v);
  }
  int add(const VarRef& v) {
    auto [it, fresh] = index_.emplace(v, static_cast<int>(vars_.size()));
    if (fresh) vars_.push_back(v);
    return it->second;
  }
  int slotOf(const VarRef& v) const {
    auto it = index_.find(v);
    return it == index_.end() ? -1 : it->second;
  }
  std::size_t size() const { return vars_.size(); }
  const std::vector<VarRef>& vars() const { return vars_; }

 private:
  std::vector<VarRef> vars_;
  std::unordered_map<VarRef, int> index_;
};

// Expression flattened into an index-addressed node array reading variables
// from a register file laid out by a SlotMap.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, const SlotMap& slots);

  Value eval(const Value* regs) const { return run(root_, regs); }
  bool holds(const Value* regs) const { return run(root_, regs) != 0; }

 private:
  struct Inst {
    Expr::Kind kind;
    Op op;
    Value lit;
    int slot;
    std::uint32_t first;
    std::uint32_t count;
    const StoreSet* set;
  };

  int emit(const Expr& e, const SlotMap& slots);
  Value run(int i, const Value* regs) const;

  std::vector<Inst> code_;
  std::vector<int> kids_;
  std::vector<std::shared_ptr<const StoreSet>> keep_;
  int root_ = -1;
};

}  // namespace alignv
