// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "tornado/bench.hpp"
#include "tornado/ccg.hpp"
#include "tornado/dbc.hpp"
#include "tornado/milp.hpp"
#include "tornado/params.hpp"
#include "tornado/second_stage.hpp"

using namespace tornado;
using geometry::Point2D;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// Counterexample where every pair and triple is coverable and a line meets
// all three disks, yet no path of length 2 does.
void remark_three(Outcome& out) {
  const auto start = Clock::now();
  const std::vector<Point2D> pts{{0, 0}, {4, 0}, {2, 1.1}};
  const double delta = 1.0;
  const auto region = geometry::Rect::bounding(pts, delta);
  std::vector<geometry::Disk> disks;
  for (auto p : pts) disks.push_back({p, delta});

  if (!geometry::infeasible_pairs(pts, delta, 2.0).empty()) out.fail("pair cuts not empty");
  if (!geometry::infeasible_triples(pts, delta).empty()) out.fail("triple cuts not empty");
  const auto sla = geometry::stabbing_line(disks);
  if (sla.count != 3) out.fail("stabbing line meets " + std::to_string(sla.count) + " disks");
  const auto bounded = geometry::segment_cover_feasible(pts, delta, 2.0, region);
  if (bounded.status != geometry::CoverStatus::infeasible) {
    out.fail(std::string("E=2 verdict ") + geometry::to_string(bounded.status));
  }
  const auto unbounded = geometry::segment_cover_feasible(pts, delta, geometry::kInfinity, region);
  if (!unbounded.feasible()) out.fail("E=inf verdict not feasible");
  const double t = seconds_since(start);
  if (t >= 1.0) out.fail("took " + std::to_string(t) + " s");
  out.detail << "E=2 " << geometry::to_string(bounded.status) << ", E=inf "
             << geometry::to_string(unbounded.status) << ", " << t << " s";
}

void geometry_oracles(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t ambiguous = 0;
  std::size_t pair_cuts = 0;
  std::size_t triple_cuts = 0;
  for (int config = 0; config < 1000; ++config) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const double delta = 0.2 + 0.8 * unit(rng);
    const double box = 1.0 + 5.0 * unit(rng);
    const double length = unit(rng) < 0.25 ? geometry::kInfinity : 3.0 * unit(rng);
    std::vector<Point2D> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({box * unit(rng), box * unit(rng)});
    const std::string where = "config " + std::to_string(config);

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& p : geometry::infeasible_pairs(pts, delta, length)) pairs.insert({p.idx[0], p.idx[1]});
    pair_cuts += pairs.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // The shortest segment meeting both disks has length d - 2Δ.
        const double gap = std::max(0.0, geometry::distance(pts[i], pts[j]) - 2.0 * delta);
        if (std::isfinite(length) && std::abs(gap - length) < 1e-7) {
          ++ambiguous;
          continue;
        }
        const bool truth = gap > length;
        if (truth != pairs.count({i, j})) out.fail(where + ": pair " + std::to_string(i) + "," + std::to_string(j));
      }
    }

    std::set<std::array<std::size_t, 3>> triples;
    for (const auto& t : geometry::infeasible_triples(pts, delta)) triples.insert(t.idx);
    triple_cuts += triples.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const double w = oracle::min_strip_width({pts[i], pts[j], pts[k]});
          if (std::abs(w - 2.0 * delta) < 1e-7) {
            ++ambiguous;
            continue;
          }
          const bool truth = w > 2.0 * delta;
          if (truth != triples.count({i, j, k})) {
            out.fail(where + ": triple " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k));
          }
        }
      }
    }

    std::vector<geometry::Disk> disks;
    for (auto p : pts) disks.push_back({p, delta});
    const auto sla = geometry::stabbing_line(disks);
    const auto best = oracle::max_stabbed(pts, delta);
    std::size_t met = 0;
    for (auto p : pts) met += sla.line.distance_to(p) <= delta + 1e-9 ? 1 : 0;
    if (sla.count != best) {
      out.fail(where + ": stabbing count " + std::to_string(sla.count) + " vs oracle " + std::to_string(best));
    }
    if (met < sla.count) out.fail(where + ": returned line meets only " + std::to_string(met) + " disks");
  }
  const double t = seconds_since(start);
  if (t >= 120.0) out.fail("took " + std::to_string(t) + " s");
  out.detail << "1000 configurations, " << pair_cuts << " pair and " << triple_cuts << " triple cuts checked, "
             << ambiguous << " boundary ties skipped, " << t << " s";
}

oracle::RandomSpec small_spec(std::mt19937_64& rng, std::size_t max_locations) {
  oracle::RandomSpec spec;
  spec.locations = std::uniform_int_distribution<std::size_t>(1, max_locations)(rng);
  spec.box = std::uniform_real_distribution<double>(1.5, 6.0)(rng);
  spec.finite_length = std::uniform_int_distribution<int>(0, 3)(rng) != 0;
  return spec;
}

model::RetrofitPlan random_plan(const model::Instance& inst, std::mt19937_64& rng) {
  return bench::random_retrofit(inst, std::uniform_real_distribution<double>(0.0, 1.0)(rng), rng());
}

void subproblem_exactness(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(777);
  std::size_t nonzero = 0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = oracle::random_instance(rng, small_spec(rng, 8));
    const auto f = random_plan(inst, rng);
    const auto coverable = oracle::coverable_masks(inst);
    const double expect = oracle::brute_phi(inst, f, coverable);
    dbc::SubproblemOptions opt;
    opt.mode = dbc::Mode::dec;
    const auto got = dbc::solve_phi(inst, f, opt);
    if (got.phi != expect) {
      std::ostringstream msg;
      msg << "instance " << i << ": phi " << got.phi << " vs oracle " << expect;
      out.fail(msg.str());
    }
    if (second_stage::solve_Q(inst, f, got.z_star.z()).objective != got.phi) {
      out.fail("instance " + std::to_string(i) + ": reported scenario does not attain phi");
    }
    if (expect > 0.0) ++nonzero;
  }
  const double t = seconds_since(start);
  if (t >= 300.0) out.fail("took " + std::to_string(t) + " s");
  out.detail << "100 instances (" << nonzero << " with positive phi), " << t << " s";
}

void end_to_end(Outcome& out) {
  const auto start = Clock::now();
  std::mt19937_64 rng(4242);
  std::size_t iterations = 0;
  for (int i = 0; i < 30; ++i) {
    auto spec = small_spec(rng, 6);
    spec.locations = std::max<std::size_t>(spec.locations, 2);
    const auto inst = oracle::random_instance(rng, spec);
    const auto expect = oracle::brute_v(inst, oracle::coverable_masks(inst));
    const auto report = ccg::solve(inst);
    iterations += report.trace.size();
    if (!report.converged) out.fail("instance " + std::to_string(i) + ": not converged");
    if (report.v != expect.v) {
      std::ostringstream msg;
      msg << "instance " << i << ": v " << report.v << " vs enumeration " << expect.v;
      out.fail(msg.str());
    }
  }
  const double t = seconds_since(start);
  if (t >= 600.0) out.fail("took " + std::to_string(t) + " s");
  out.detail << "30 instances, " << iterations << " iterations in total, " << t << " s";
}

void mode_comparison(Outcome& out) {
  std::size_t ordered = 0;
  std::ostringstream rows;
  for (std::uint64_t sample = 1; sample <= 5; ++sample) {
    const auto inst = oracle::testbed_instance(sample);
    std::array<std::size_t, 3> nodes{};
    std::array<double, 3> secs{};
    std::array<double, 3> values{};
    const std::array<dbc::Mode, 3> modes{dbc::Mode::dec, dbc::Mode::avc, dbc::Mode::org};
    for (std::size_t m = 0; m < 3; ++m) {
      ccg::CcgOptions opt;
      opt.subproblem.mode = modes[m];
      const auto report = ccg::solve(inst, opt);
      if (m == 0 && !report.converged) out.fail("DEC did not solve sample " + std::to_string(sample));
      nodes[m] = report.subproblem_nodes;
      secs[m] = report.timings.subproblem;
      values[m] = report.v;
    }
    if (std::abs(values[0] - values[1]) > 1e-6 || std::abs(values[0] - values[2]) > 1e-6) {
      out.fail("modes disagree on sample " + std::to_string(sample));
    }
    if (nodes[0] <= nodes[1] && nodes[1] <= nodes[2]) ++ordered;
    rows << " s" << sample << " nodes " << nodes[0] << "/" << nodes[1] << "/" << nodes[2] << " ("
         << std::round(secs[0] * 1e3) << "/" << std::round(secs[1] * 1e3) << "/" << std::round(secs[2] * 1e3)
         << " ms);";
  }
  if (ordered < 4) out.fail("DEC <= AVC <= ORG on only " + std::to_string(ordered) + " of 5 samples");
  out.detail << "ordered on " << ordered << "/5, DEC/AVC/ORG" << rows.str();
}

void dominance(Outcome& out) {
  std::mt19937_64 rng(99);
  std::size_t random_plans = 0;
  std::size_t draws = 0;
  for (int i = 0; i < 6; ++i) {
    oracle::RandomSpec spec;
    spec.locations = 7;
    spec.strategies = 3;
    spec.box = 4.0;
    auto inst = oracle::random_instance(rng, spec);
    const auto report = ccg::solve(inst);
    const double robust = bench::evaluate_worst_case(report.f_star, inst);
    if (std::abs(robust - report.v) > 1e-9) out.fail("worst case of the robust plan differs from v");
    for (int r = 0; r < 10; ++r) {
      const auto f = random_plan(inst, rng);
      ++random_plans;
      if (robust > bench::evaluate_worst_case(f, inst)) out.fail("a random plan beats the robust plan");
    }
    bench::SimulationOptions sim;
    sim.replications = 100;
    sim.seed = 1000 + i;
    const auto res = bench::simulate_random_tornadoes(report.f_star, inst, sim);
    draws += res.draws.size();
    for (const auto& d : res.draws) {
      if (d.dislocation > report.v + 1e-6) out.fail("a simulated tornado exceeds the worst case");
    }

    std::vector<model::Cents> budgets;
    for (int k = 0; k <= 4; ++k) budgets.push_back(inst.budget * k / 2);
    try {
      bench::budget_sweep(inst, budgets);
    } catch (const std::logic_error& e) {
      out.fail(e.what());
    }
  }

  // One location whose retrofit removes all dislocation at cost A0.
  model::Instance step;
  step.name = "threshold";
  step.resize(1, 2, 2);
  step.locations[0] = {"only", {0.0, 0.0}, 50.0, 100.0};
  step.d(0, 1) = 100'000;
  step.g(0, 0, 0) = 50;
  step.g(0, 0, 1) = 50;
  step.c(0, 0, 1) = 10'000'000;
  step.delta = 1.0;
  step.region = {-1, 1, -1, 1};
  const std::vector<model::Cents> budgets{0, 99'999, 100'000, 200'000};
  const auto curve = bench::budget_sweep(step, budgets);
  std::ostringstream vs;
  for (const auto& p : curve) vs << p.v << " ";
  if (!(curve[1].v > curve[2].v)) out.fail("no strict drop at the threshold budget: " + vs.str());
  for (std::size_t k = 1; k < curve.size(); ++k) {
    if (curve[k].v > curve[k - 1].v) out.fail("v increased with budget");
  }
  out.detail << random_plans << " random plans, " << draws << " simulated tornadoes, threshold curve " << vs.str();
}

void pipeline_identities(Outcome& out) {
  auto close = [&](double got, double want, const std::string& what) {
    if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
      std::ostringstream msg;
      msg << what << ": " << got << " vs " << want;
      out.fail(msg.str());
    }
  };
  params::FragilityConfig cfg;
  const double z80 = 0.8416212335729143;  // standard normal 0.8 quantile
  cfg.repair = {{60.0 * std::exp(0.5 * z80), 0.5}, {60.0 * std::exp(-0.5 * z80), 0.5}, {1.0, 0.0}, {1e9, 0.0}};
  cfg.strategies = {{"mix", {0.5, 0.5, 0.0, 0.0}, 0.0, 0.0},
                    {"never", {0.0, 0.0, 0.0, 1.0}, 0.0, 0.0},
                    {"instant", {0.0, 0.0, 1.0, 0.0}, 0.0, 0.0},
                    {"minor", {1.0, 0.0, 0.0, 0.0}, 0.0, 0.0},
                    {"uniform", {0.25, 0.25, 0.25, 0.25}, 0.0, 0.0}};
  close(params::prob_still_dislocated(cfg, 0), 0.8, "P[X=1] upper state");
  close(params::prob_still_dislocated(cfg, 1), 0.2, "P[X=1] lower state");
  close(params::dislocation_after_recovery(cfg, 0, 120.0), 60.0, "two-state mix");
  close(params::dislocation_after_recovery(cfg, 1, 120.0), 120.0, "never repaired");
  close(params::dislocation_after_recovery(cfg, 2, 120.0), 0.0, "instantly repaired");
  close(params::lognormal_cdf(10.0 * std::exp(0.5), 10.0, 0.5), 0.8413447460685429, "lognormal cdf at +1 sigma");
  close(params::recovery_cost(cfg, 3, 1000.0), 0.005 * 862.0 * 1000.0, "all minor cost");
  close(params::recovery_cost(cfg, 4, 1000.0), 862.0 * 1000.0 * (0.005 + 0.023 + 0.117 + 0.234) / 4.0, "uniform cost");
  close(params::recovery_cost(cfg, 3, 0.0), 0.0, "zero area");
  close(params::do_nothing_dislocation(40.0, 100.0), 70.0, "midpoint 40/100");
  close(params::do_nothing_dislocation(0.0, 100.0), 50.0, "midpoint 0/100");
  close(params::do_nothing_dislocation(100.0, 100.0), 100.0, "midpoint N/N");

  std::mt19937_64 rng(31337);
  std::size_t knapsacks = 0;
  for (int i = 0; i < 200; ++i) {
    oracle::RandomSpec spec;
    spec.locations = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    spec.plans = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    const auto inst = oracle::random_instance(rng, spec);
    const auto f = random_plan(inst, rng);
    std::vector<std::uint8_t> z(inst.size());
    for (auto& b : z) b = rng() & 1U;
    second_stage::RecoveryOptions dp;
    dp.method = second_stage::Method::dynamic_programming;
    second_stage::RecoveryOptions bb;
    bb.method = second_stage::Method::branch_and_bound;
    const auto a = second_stage::solve_Q(inst, f, z, dp);
    const auto b = second_stage::solve_Q(inst, f, z, bb);
    const double brute = oracle::brute_Q(inst, f, z);
    if (a.objective != b.objective || a.objective != brute) {
      std::ostringstream msg;
      msg << "recovery instance " << i << ": DP " << a.objective << ", B&B " << b.objective << ", brute " << brute;
      out.fail(msg.str());
    }
    ++knapsacks;
  }

  std::size_t models = 0;
  std::size_t infeasible = 0;
  for (int i = 0; i < 500; ++i) {
    milp::Model m;
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int j = 0; j < 12; ++j) m.add_variable("x" + std::to_string(j), milp::VarKind::binary);
    const int rows = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int r = 0; r < rows; ++r) {
      std::vector<milp::Term> terms;
      for (std::size_t j = 0; j < 12; ++j) {
        if (rng() % 3 != 0) terms.push_back({j, static_cast<double>(coef(rng))});
      }
      const auto sense = static_cast<milp::RowSense>(rng() % 3 == 0 ? (rng() % 2 == 0 ? 1 : 2) : 0);
      m.add_constraint("c" + std::to_string(r), std::move(terms), sense, coef(rng) + 3.0);
    }
    std::vector<milp::Term> obj;
    for (std::size_t j = 0; j < 12; ++j) obj.push_back({j, static_cast<double>(coef(rng))});
    m.set_objective(rng() % 2 ? milp::ObjSense::maximize : milp::ObjSense::minimize, std::move(obj));

    // Independent 2^12 enumeration.
    bool found = false;
    double best = 0.0;
    const bool maximize = m.sense() == milp::ObjSense::maximize;
    for (std::uint32_t mask = 0; mask < 4096; ++mask) {
      std::vector<double> x(12);
      for (int j = 0; j < 12; ++j) x[j] = (mask >> j) & 1U;
      if (m.max_violation(x) > 1e-9) continue;
      const double v = m.evaluate(x);
      if (!found || (maximize ? v > best : v < best)) best = v;
      found = true;
    }
    const auto res = milp::solve_embedded(m);
    ++models;
    if (!found) {
      ++infeasible;
      if (res.status != milp::Status::infeasible) out.fail("model " + std::to_string(i) + ": infeasible model solved");
      continue;
    }
    if (res.status != milp::Status::optimal || std::abs(res.objective - best) > 1e-6) {
      std::ostringstream msg;
      msg << "model " << i << ": embedded " << res.objective << " vs enumeration " << best;
      out.fail(msg.str());
    }
  }
  out.detail << "params hand values, " << knapsacks << " recovery problems, " << models << " MILPs (" << infeasible
             << " infeasible)";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"Three-point counterexample", remark_three},
      {"Geometry against sweep oracles", geometry_oracles},
      {"Subproblem exactness", subproblem_exactness},
      {"End-to-end optimality", end_to_end},
      {"Subproblem mode comparison", mode_comparison},
      {"Dominance and monotonicity", dominance},
      {"Pipeline identities", pipeline_identities},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": "
              << out.detail.str() << std::endl;
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
