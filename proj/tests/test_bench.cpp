#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tornado/bench.hpp"
#include "tornado/ccg.hpp"

using namespace tornado;

namespace {

model::Instance sample(std::uint64_t seed, std::size_t locations = 6) {
  std::mt19937_64 rng(seed);
  oracle::RandomSpec spec;
  spec.locations = locations;
  spec.strategies = 3;
  return oracle::random_instance(rng, spec);
}

}  // namespace

TEST_CASE("random retrofit") {
  const auto inst = sample(1);
  CHECK(bench::random_retrofit(inst, 0.0, 5) == model::RetrofitPlan::do_nothing(inst));
  CHECK(bench::random_retrofit(inst, 0.8, 5) == bench::random_retrofit(inst, 0.8, 5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = bench::random_retrofit(inst, 0.6, seed);
    CHECK(f.retrofit_cost() <= inst.budget * 6 / 10 + 1);
  }
  auto poor = inst;
  poor.budget = 0;
  for (std::size_t l = 0; l < poor.size(); ++l) {
    for (std::size_t s = 1; s < poor.num_strategies; ++s) poor.d(l, s) = 1'000'000;
  }
  CHECK(bench::random_retrofit(poor, 1.0, 3) == model::RetrofitPlan::do_nothing(poor));
}

TEST_CASE("worst case of the optimal plan is v") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const auto inst = sample(seed);
    const auto r = ccg::solve(inst);
    CHECK(bench::evaluate_worst_case(r.f_star, inst) == doctest::Approx(r.v));
    const auto f = bench::random_retrofit(inst, 1.0, seed);
    CHECK(bench::evaluate_worst_case(f, inst) >= r.v - 1e-9);
  }
}

TEST_CASE("simulated tornadoes that miss everything") {
  auto inst = sample(3);
  inst.delta = 1e-9;
  inst.max_length = 0.0;
  const auto f = bench::random_retrofit(inst, 1.0, 2);
  bench::SimulationOptions opt;
  opt.replications = 50;
  const auto res = bench::simulate_random_tornadoes(f, inst, opt);
  for (const auto& d : res.draws) {
    CHECK(d.hit == 0);
    CHECK(d.dislocation == f.first_stage_dislocation(inst));
  }
  CHECK(res.summary.std_dev == 0.0);
}

TEST_CASE("simulation statistics") {
  const auto s = bench::summarize({5.0, 5.0, 5.0}, 9);
  CHECK(s.std_dev == 0.0);
  CHECK(s.average == 5.0);
  CHECK(s.replications == 3);
  const auto t = bench::summarize({1.0, 3.0}, 9);
  CHECK(t.std_dev == doctest::Approx(std::sqrt(2.0)));
  CHECK(t.minimum == 1.0);
  CHECK(t.maximum == 3.0);
  CHECK(bench::summarize({4.0}, 1).std_dev == 0.0);
}

TEST_CASE("simulation is reproducible and bounded by the worst case") {
  const auto inst = sample(4, 7);
  const auto r = ccg::solve(inst);
  bench::SimulationOptions opt;
  opt.replications = 200;
  opt.seed = 42;
  opt.threads = 1;
  const auto a = bench::simulate_random_tornadoes(r.f_star, inst, opt);
  opt.threads = 4;
  const auto b = bench::simulate_random_tornadoes(r.f_star, inst, opt);
  CHECK(bench::replications_csv(a) == bench::replications_csv(b));
  CHECK(a.summary.average == b.summary.average);
  for (const auto& d : a.draws) {
    CHECK(d.dislocation <= r.v + 1e-9);
    CHECK(inst.region.contains(d.segment.e0, 1e-9));
    CHECK(inst.region.contains(d.segment.e1, 1e-9));
    CHECK(d.segment.length() <= inst.max_length + 1e-9);
  }
  opt.length = bench::LengthLaw::uniform;
  CHECK(bench::simulate_random_tornadoes(r.f_star, inst, opt).draws.size() == 200);
  const auto csv = bench::summary_csv({{"robust", a.summary}});
  CHECK(csv.rfind("label,average,maximum,minimum,std_dev,replications,seed\n", 0) == 0);
}

TEST_CASE("budget sweep") {
  const auto inst = sample(6);
  const auto zero = bench::budget_sweep(inst, {0});
  REQUIRE(zero.size() == 1);
  auto broke = inst;
  broke.budget = 0;
  CHECK(zero[0].v == bench::evaluate_worst_case(model::RetrofitPlan::do_nothing(broke), broke));
  const auto dup = bench::budget_sweep(inst, {5'000, 5'000});
  CHECK(dup[0].v == dup[1].v);
  std::vector<model::Cents> budgets;
  for (int k = 0; k <= 5; ++k) budgets.push_back(k * 4'000);
  const auto curve = bench::budget_sweep(inst, budgets);
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k].v <= curve[k - 1].v);
  CHECK_THROWS_AS(bench::budget_sweep(inst, {10, 5}), std::invalid_argument);
  CHECK(bench::sweep_csv(curve).rfind("budget_usd,v,first_stage,phi\n", 0) == 0);
}
