#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "tornado/ccg.hpp"

namespace tornado::ccg {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct ScenarioPool {
  std::vector<TornadoScenario> items;
  std::unordered_multimap<std::size_t, std::size_t> by_hash;

  bool add(const TornadoScenario& z) {
    const auto h = z.hash();
    auto [lo, hi] = by_hash.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
      if (items[it->second] == z) return false;
    }
    by_hash.emplace(h, items.size());
    items.push_back(z);
    return true;
  }
};

milp::MilpResult solve_master(const Master& master, const CcgOptions& options) {
  if (!options.solver_cmd.empty()) return milp::solve_external(master.model, options.solver_cmd);
  return milp::solve_embedded(master.model, options.master);
}

}  // namespace

SolveReport solve(const Instance& inst, const CcgOptions& options) {
  model::require_valid(inst);
  const auto start = Clock::now();

  SolveReport report;
  report.instance_name = inst.name;
  report.mode = options.subproblem.mode;

  ScenarioPool pool;
  pool.add(options.seed ? *options.seed : TornadoScenario::none(inst.size()));

  geometry::CoverOptions cover;
  dbc::FeasibilityCache shared(cover);

  double lb = -geometry::kInfinity;
  double ub = geometry::kInfinity;
  std::optional<RetrofitPlan> best;
  double best_phi = 0.0;
  dbc::SubproblemResult best_sub;

  for (std::size_t k = 1; k <= options.max_iterations; ++k) {
    IterationRecord rec;
    rec.iteration = k;

    auto t = Clock::now();
    const Master master = build_master(pool.items, inst);
    const auto mres = solve_master(master, options);
    rec.master_time = since(t);
    report.timings.master += rec.master_time;
    report.master_nodes += mres.nodes;
    if (mres.status != milp::Status::optimal) {
      throw std::runtime_error(std::string("master problem not solved: ") + milp::to_string(mres.status));
    }
    const RetrofitPlan f = plan_from_solution(master, inst, mres.x);
    lb = std::max(lb, mres.objective);
    rec.theta = mres.x[master.theta_var];
    rec.plan = f.strategies();

    t = Clock::now();
    dbc::FeasibilityCache local(cover);
    auto sub = dbc::solve_phi(inst, f, options.subproblem, options.reuse_conflicts ? &shared : &local);
    rec.sub_time = since(t);
    report.timings.subproblem += rec.sub_time;
    report.subproblem_nodes += sub.node_count;
    report.inconclusive += sub.inconclusive;
    if (!options.reuse_conflicts) report.timings.separation += local.seconds();
    rec.sub_nodes = sub.node_count;
    rec.phi = sub.phi;

    const double value = f.first_stage_dislocation(inst) + sub.phi;
    if (value < ub) {
      ub = value;
      best = f;
      best_phi = sub.phi;
      best_sub = sub;
    }
    rec.lb = lb;
    rec.ub = ub;

    if (ub - lb <= options.epsilon) {
      report.trace.push_back(std::move(rec));
      report.converged = true;
      break;
    }
    rec.scenario_added = pool.add(sub.z_star);
    report.trace.push_back(std::move(rec));
    // A repeated scenario with an open gap means the master disagrees with
    // its own cuts; the loop cannot progress.
    if (!report.trace.back().scenario_added) break;
  }
  if (!best) throw std::runtime_error("no iteration completed");
  if (options.reuse_conflicts) report.timings.separation = shared.seconds();

  report.f_star = *best;
  report.first_stage = best->first_stage_dislocation(inst);
  report.phi = best_phi;
  report.v = ub;
  report.worst_case = best_sub.z_star;
  report.worst_recovery = best_sub.recovery;
  report.scenarios = pool.items;
  for (const auto& z : pool.items) report.recoveries.push_back(second_stage::solve_Q(inst, *best, z.z()));
  report.timings.total = since(start);
  return report;
}

}  // namespace tornado::ccg
