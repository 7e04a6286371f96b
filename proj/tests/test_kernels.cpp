#include <random>

#include <doctest.h>

#include "support.hpp"

using namespace alignv;
using testing::una;

namespace {

std::vector<VarRef> vars(std::initializer_list<const char*> names) {
  std::vector<VarRef> out;
  for (const char* n : names) out.push_back(VarRef{n});
  return out;
}

}  // namespace

TEST_CASE("serial and parallel enumeration agree") {
  const std::vector<std::string> constraints = {
      "x < y", "x + y + z = 3", "x * y > z", "{x, y : (1, 2), (2, 3), (0, 0)}", "x % 3 = 0 && z != y", "false",
  };
  for (const auto& c : constraints) {
    CAPTURE(c);
    SearchPlan plan(vars({"x", "y", "z"}), {una(c).expr()}, Domain{-4, 4});
    CHECK(countSerial(plan) == countParallel(plan));
    CHECK(collectSerial(plan) == collectParallel(plan));
    CHECK(collectSerial(plan).size() == countSerial(plan));
  }
}

TEST_CASE("the first violation is the same in both kernels") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> pick(-6, 6);
  for (int round = 0; round < 20; ++round) {
    const Value k = pick(rng);
    SearchPlan plan(vars({"a", "b", "c"}), {}, Domain{-5, 5});
    const int sa = plan.slots().slotOf(VarRef{"a"}), sb = plan.slots().slotOf(VarRef{"b"});
    LeafFn leaf = [&](const Value* r) { return r[sa] * r[sb] != k; };
    auto s = findViolationSerial(plan, leaf);
    auto p = findViolationParallel(plan, leaf);
    CHECK(s == p);
  }
}

TEST_CASE("impliesBounded is deterministic across kernels") {
  Formula f = una("x > y && y > z"), g = una("x > z + 2");
  auto s = impliesBounded(f, g, Domain{-6, 6}, Exec::Serial);
  auto p = impliesBounded(f, g, Domain{-6, 6}, Exec::Parallel);
  REQUIRE_FALSE(s.holds);
  REQUIRE_FALSE(p.holds);
  CHECK(s.witness->left == p.witness->left);
}

TEST_CASE("parallelFor visits every index and rethrows") {
  std::vector<int> hit(100, 0);
  parallelFor(hit.size(), [&](std::size_t i) { hit[i] = 1; }, Exec::Parallel);
  CHECK(std::count(hit.begin(), hit.end(), 1) == 100);
  CHECK_THROWS_AS(parallelFor(
                      10,
                      [](std::size_t i) {
                        if (i == 3) throw DomainError("boom");
                      },
                      Exec::Parallel),
                  DomainError);
}

TEST_CASE("thread cap") {
  const int before = threadCap();
  setThreadCap(2);
  CHECK(threadCap() == 2);
  setThreadCap(before);
  CHECK(threadCap() >= 1);
}
