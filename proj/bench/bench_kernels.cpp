#include <benchmark/benchmark.h>

#include "alignv/annotation.hpp"
#include "alignv/enumerate.hpp"
#include "alignv/product.hpp"

using namespace alignv;

namespace {

Domain domainOf(const benchmark::State& state) {
  const auto h = static_cast<Value>(state.range(0));
  return Domain{-h, h};
}

void countKernel(benchmark::State& state, Exec exec) {
  std::vector<VarRef> vars = {VarRef{"x"}, VarRef{"y"}, VarRef{"z"}, VarRef{"w"}};
  Formula f = parseFormula("x * y + z > w && x % 3 != y", FormulaMode::Unary);
  SearchPlan plan(vars, {f.expr()}, domainOf(state));
  for (auto _ : state) benchmark::DoNotOptimize(exec == Exec::Serial ? countSerial(plan) : countParallel(plan));
}

void implication(benchmark::State& state, Exec exec) {
  Formula f = parseFormula("agree(x, x) && agree(y, y) && left(x > 0)", FormulaMode::Relational);
  Formula g = parseFormula("x * y = x' * y' && x' > 0", FormulaMode::Relational);
  for (auto _ : state) benchmark::DoNotOptimize(impliesBounded(f, g, domainOf(state), exec).holds);
}

void vcCheck(benchmark::State& state, Exec exec) {
  Program c = parseProgram("y := x; z := 1; while y != 0 do z := z * y; y := y - 1 od");
  Automaton prod = buildProduct(c, c, ProductSpec::of(ProductKind::LockstepControl));
  auto dom = domainOf(state);
  auto sa = strongestAnnotation(prod, parseFormula("agree(x, x)", FormulaMode::Relational),
                                parseFormula("agree(z, z)", FormulaMode::Relational), Domain{0, 4}, 10000);
  for (auto _ : state) benchmark::DoNotOptimize(allHold(checkVCs(prod, *sa.annotation, dom, exec)));
}

}  // namespace

BENCHMARK_CAPTURE(countKernel, serial, Exec::Serial)->Arg(6)->Arg(10);
BENCHMARK_CAPTURE(countKernel, parallel, Exec::Parallel)->Arg(6)->Arg(10);
BENCHMARK_CAPTURE(implication, serial, Exec::Serial)->Arg(6)->Arg(10);
BENCHMARK_CAPTURE(implication, parallel, Exec::Parallel)->Arg(6)->Arg(10);
BENCHMARK_CAPTURE(vcCheck, serial, Exec::Serial)->Arg(4)->Arg(8);
BENCHMARK_CAPTURE(vcCheck, parallel, Exec::Parallel)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
