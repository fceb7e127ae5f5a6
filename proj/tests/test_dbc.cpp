#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tornado/bench.hpp"
#include "tornado/dbc.hpp"
#include "tornado/second_stage.hpp"

using namespace tornado;
using dbc::Mode;

namespace {

// Three collinear locations, the middle one heavy; the outer two are too far
// apart for one short path.
model::Instance line_of_three(double length) {
  model::Instance inst;
  inst.name = "line";
  inst.resize(3, 1, 1);
  const double pops[3] = {30.0, 50.0, 40.0};
  for (std::size_t l = 0; l < 3; ++l) {
    inst.locations[l] = {"L" + std::to_string(l), {2.0 * l, 0.0}, pops[l], 0.0};
    inst.g(l, 0, 0) = pops[l];
  }
  inst.delta = 0.5;
  inst.max_length = length;
  inst.region = {-0.5, 4.5, -0.5, 0.5};
  return inst;
}

dbc::SubproblemOptions in_mode(Mode m) {
  dbc::SubproblemOptions o;
  o.mode = m;
  return o;
}

}  // namespace

TEST_CASE("mode names") {
  CHECK(dbc::parse_mode("dec") == Mode::dec);
  CHECK(dbc::parse_mode("AVC") == Mode::avc);
  CHECK(dbc::parse_mode("Org") == Mode::org);
  CHECK(std::string(dbc::to_string(Mode::avc)) == "AVC");
  CHECK_THROWS_AS(dbc::parse_mode("fast"), std::invalid_argument);
}

TEST_CASE("hand instance in every mode") {
  for (double length : {0.5, 2.0, 10.0}) {
    const auto inst = line_of_three(length);
    const auto f = model::RetrofitPlan::do_nothing(inst);
    // Gaps between neighbours are 1, the outer pair needs 3.
    const double expect = length >= 3.0 ? 120.0 : (length >= 1.0 ? 90.0 : 50.0);
    for (auto m : {Mode::dec, Mode::avc, Mode::org}) {
      for (auto b : {dbc::NodeBound::lp, dbc::NodeBound::combinatorial}) {
        auto opt = in_mode(m);
        opt.bound = b;
        const auto r = dbc::solve_phi(inst, f, opt);
        CHECK(r.phi == expect);
        CHECK(second_stage::solve_Q(inst, f, r.z_star.z()).objective == r.phi);
        REQUIRE(r.z_star.witness());
        CHECK(model::witness_certifies(inst, r.z_star.z(), *r.z_star.witness()));
      }
    }
  }
}

TEST_CASE("initial cut pool") {
  const auto inst = line_of_three(2.0);
  const auto f = model::RetrofitPlan::do_nothing(inst);
  const auto dec = dbc::init_cut_pool(inst, f, Mode::dec);
  CHECK(dec.conflicts == std::vector<dbc::LocationSet>{{0, 2}});
  CHECK(dec.counts.pair == 1);
  CHECK(dec.recourse.size() == 1);
  CHECK(dbc::init_cut_pool(inst, f, Mode::org).conflicts.empty());

  dbc::CutPool pool;
  CHECK(pool.add_conflict({1, 2}));
  CHECK_FALSE(pool.add_conflict({1, 2}));
  CHECK(pool.add_recourse({0, 0, 0}));
  CHECK_FALSE(pool.add_recourse({0, 0, 0}));
}

TEST_CASE("separation verdicts") {
  const auto inst = line_of_three(2.0);
  const auto f = model::RetrofitPlan::do_nothing(inst);
  dbc::FeasibilityCache cache;
  auto v = dbc::separate(inst, f, 200.0, {1, 1, 1}, cache);
  CHECK(v.kind == dbc::VerdictKind::conflict_cut);
  CHECK(v.conflict == dbc::LocationSet{0, 1, 2});
  v = dbc::separate(inst, f, 200.0, {1, 1, 0}, cache);
  CHECK(v.kind == dbc::VerdictKind::recourse_cut);
  CHECK(v.recovery.objective == 80.0);
  v = dbc::separate(inst, f, 80.0, {1, 1, 0}, cache);
  CHECK(v.kind == dbc::VerdictKind::feasible);
  // A repeated active set is answered from the cache.
  const double spent = cache.seconds();
  const auto nonconvex = cache.nonconvex_runs();
  dbc::separate(inst, f, 80.0, {1, 1, 0}, cache);
  CHECK(cache.seconds() == spent);
  CHECK(cache.nonconvex_runs() == nonconvex);
}

TEST_CASE("trace output is one JSON object per line") {
  const auto inst = line_of_three(2.0);
  std::ostringstream os;
  auto opt = in_mode(Mode::dec);
  opt.trace = &os;
  dbc::solve_phi(inst, model::RetrofitPlan::do_nothing(inst), opt);
  std::istringstream in(os.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    CHECK(line.front() == '{');
    CHECK(line.back() == '}');
    ++lines;
  }
  CHECK(lines > 0);
}

TEST_CASE("every mode matches the exhaustive oracle") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 40; ++i) {
    oracle::RandomSpec spec;
    spec.locations = 2 + rng() % 6;
    spec.box = 2.0 + 3.0 * (rng() % 100) / 100.0;
    spec.finite_length = i % 4 != 0;
    const auto inst = oracle::random_instance(rng, spec);
    const auto f = bench::random_retrofit(inst, 0.5, rng());
    const double expect = oracle::brute_phi(inst, f, oracle::coverable_masks(inst));
    dbc::FeasibilityCache shared;
    for (auto m : {Mode::dec, Mode::avc, Mode::org}) {
      CHECK(dbc::solve_phi(inst, f, in_mode(m)).phi == expect);
      CHECK(dbc::solve_phi(inst, f, in_mode(m), &shared).phi == expect);
    }
  }
}

TEST_CASE("a shared cache keeps answers unchanged across plans") {
  std::mt19937_64 rng(55);
  oracle::RandomSpec spec;
  spec.locations = 7;
  spec.strategies = 3;
  const auto inst = oracle::random_instance(rng, spec);
  const auto coverable = oracle::coverable_masks(inst);
  dbc::FeasibilityCache cache;
  for (int i = 0; i < 10; ++i) {
    const auto f = bench::random_retrofit(inst, 0.7, rng());
    CHECK(dbc::solve_phi(inst, f, {}, &cache).phi == oracle::brute_phi(inst, f, coverable));
  }
}
