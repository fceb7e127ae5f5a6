#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tornado/second_stage.hpp"

using namespace tornado;
using second_stage::Method;

namespace {

model::Instance single(model::Cents budget) {
  model::Instance inst;
  inst.resize(1, 1, 2);
  inst.locations[0] = {"a", {0.0, 0.0}, 100.0, 0.0};
  inst.g(0, 0, 0) = 100.0;
  inst.g(0, 0, 1) = 40.0;
  inst.c(0, 0, 1) = 10;
  inst.budget = budget;
  inst.region = {-1.0, 1.0, -1.0, 1.0};
  return inst;
}

second_stage::RecoveryOptions with(Method m) {
  second_stage::RecoveryOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("single location recovery") {
  const auto inst = single(10);
  const auto f = model::RetrofitPlan::do_nothing(inst);
  for (auto m : {Method::automatic, Method::dynamic_programming, Method::branch_and_bound}) {
    const auto r = second_stage::solve_Q(inst, f, {1}, with(m));
    CHECK(r.plan_of == std::vector<std::size_t>{1});
    CHECK(r.objective == 40.0);
    CHECK(r.spend == 10);
  }
  const auto poor = single(9);
  const auto r = second_stage::solve_Q(poor, model::RetrofitPlan::do_nothing(poor), {1});
  CHECK(r.plan_of == std::vector<std::size_t>{0});
  CHECK(r.objective == 100.0);
}

TEST_CASE("unhit locations contribute nothing") {
  const auto inst = single(10);
  const auto r = second_stage::solve_Q(inst, model::RetrofitPlan::do_nothing(inst), {0});
  CHECK(r.objective == 0.0);
  CHECK(r.plan_of == std::vector<std::size_t>{0});
}

TEST_CASE("ties go to the lexicographically smallest plan") {
  model::Instance inst;
  inst.resize(2, 1, 2);
  for (std::size_t l = 0; l < 2; ++l) {
    inst.locations[l] = {"x", {0.0, 0.0}, 50.0, 0.0};
    inst.g(l, 0, 0) = 50.0;
    inst.g(l, 0, 1) = 20.0;
    inst.c(l, 0, 1) = 100;
  }
  inst.budget = 100;
  inst.region = {-1.0, 1.0, -1.0, 1.0};
  const auto f = model::RetrofitPlan::do_nothing(inst);
  for (auto m : {Method::dynamic_programming, Method::branch_and_bound}) {
    const auto r = second_stage::solve_Q(inst, f, {1, 1}, with(m));
    CHECK(r.objective == 70.0);
    CHECK(r.plan_of == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("argument checks") {
  auto inst = single(10);
  const auto f = model::RetrofitPlan::do_nothing(inst);
  CHECK_THROWS_AS(second_stage::solve_Q(inst, f, {1, 0}), std::invalid_argument);
}

TEST_CASE("helpers agree with the solver") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    oracle::RandomSpec spec;
    spec.locations = 5;
    spec.plans = 3;
    const auto inst = oracle::random_instance(rng, spec);
    const auto f = model::RetrofitPlan::do_nothing(inst);
    const auto z = oracle::mask_to_z(rng() % 32, inst.size());
    const auto r = second_stage::solve_Q(inst, f, z);
    CHECK(second_stage::recovery_feasible(inst, f, r.plan_of));
    CHECK(second_stage::recovery_spend(inst, f, r.plan_of) == r.spend);
    CHECK(second_stage::recovery_objective(inst, f, z, r.plan_of) == r.objective);
  }
}

TEST_CASE("DP and branch-and-bound match enumeration") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    oracle::RandomSpec spec;
    spec.locations = 1 + rng() % 8;
    spec.strategies = 3;
    spec.plans = 2 + rng() % 3;
    const auto inst = oracle::random_instance(rng, spec);
    std::vector<std::size_t> s_of(inst.size());
    for (auto& s : s_of) s = rng() % 3;
    model::Cents cost = 0;
    for (std::size_t l = 0; l < inst.size(); ++l) cost += inst.d(l, s_of[l]);
    const auto f = cost <= inst.budget ? model::RetrofitPlan(inst, s_of) : model::RetrofitPlan::do_nothing(inst);
    const auto z = oracle::mask_to_z(rng(), inst.size());
    const double brute = oracle::brute_Q(inst, f, z);
    CHECK(second_stage::solve_Q(inst, f, z, with(Method::dynamic_programming)).objective == brute);
    CHECK(second_stage::solve_Q(inst, f, z, with(Method::branch_and_bound)).objective == brute);
  }
}
