#include "alignv/compiled.hpp"

#include <array>

namespace alignv {

CompiledExpr::CompiledExpr(const Expr& e, const SlotMap& slots) { root_ = emit(e, slots); }

int CompiledExpr::emit(const Expr& e, const SlotMap& slots) {
  Inst in{e.kind(), Op::Add, 0, -1, 0, 0, nullptr};
  std::vector<int> kids;
  switch (e.kind()) {
    case Expr::Kind::Lit:
      in.lit = e.value();
      break;
    case Expr::Kind::Var:
      in.slot = slots.slotOf(e.var());
      if (in.slot < 0) throw DomainError("variable not in enumeration footprint: " + toString(e.var()));
      break;
    case Expr::Kind::Binary:
      in.op = e.op();
      [[fallthrough]];
    case Expr::Kind::Not:
    case Expr::Kind::And:
    case Expr::Kind::Or:
      for (const auto& a : e.args()) kids.push_back(emit(a, slots));
      break;
    case Expr::Kind::Set:
    case Expr::Kind::Subst: {
      in.kind = Expr::Kind::Set;
      in.set = &e.set();
      keep_.push_back(e.setPtr());
      for (const auto& v : e.set().vars()) {
        const Expr* src = nullptr;
        for (const auto& [k, r] : e.bindings())
          if (k == v) src = &r;
        kids.push_back(src ? emit(*src, slots) : emit(Expr::var(v), slots));
      }
      break;
    }
  }
  in.first = static_cast<std::uint32_t>(kids_.size());
  in.count = static_cast<std::uint32_t>(kids.size());
  kids_.insert(kids_.end(), kids.begin(), kids.end());
  code_.push_back(in);
  return static_cast<int>(code_.size() - 1);
}

Value CompiledExpr::run(int i, const Value* regs) const {
  const Inst& in = code_[static_cast<std::size_t>(i)];
  const int* k = kids_.data() + in.first;
  switch (in.kind) {
    case Expr::Kind::Lit:
      return in.lit;
    case Expr::Kind::Var:
      return regs[in.slot];
    case Expr::Kind::Binary:
      if (in.op == Op::Implies) return run(k[0], regs) == 0 || run(k[1], regs) != 0;
      return applyOp(in.op, run(k[0], regs), run(k[1], regs));
    case Expr::Kind::Not:
      return run(k[0], regs) == 0;
    case Expr::Kind::And:
      for (std::uint32_t j = 0; j < in.count; ++j)
        if (run(k[j], regs) == 0) return 0;
      return 1;
    case Expr::Kind::Or:
      for (std::uint32_t j = 0; j < in.count; ++j)
        if (run(k[j], regs) != 0) return 1;
      return 0;
    default: {
      if (in.count <= 32) {
        std::array<Value, 32> buf;
        for (std::uint32_t j = 0; j < in.count; ++j) buf[j] = run(k[j], regs);
        return in.set->contains(std::span<const Value>(buf.data(), in.count));
      }
      std::vector<Value> buf(in.count);
      for (std::uint32_t j = 0; j < in.count; ++j) buf[j] = run(k[j], regs);
      return in.set->contains(buf);
    }
  }
}

}  // namespace alignv
