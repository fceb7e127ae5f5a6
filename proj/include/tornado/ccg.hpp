#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tornado/dbc.hpp"
#include "tornado/milp.hpp"
#include "tornado/model.hpp"
#include "tornado/second_stage.hpp"

/// Column-and-constraint generation for the two-stage retrofit problem.
namespace tornado::ccg {

using model::Instance;
using model::RetrofitPlan;
using model::TornadoScenario;

/// Master problem over a scenario pool, with the variable layout needed to
/// read the plan back.
struct Master {
  milp::Model model;
  std::vector<std::size_t> f_var;  ///< [l * S + s]
  std::size_t theta_var = 0;
};

/// min w f + theta subject to one assignment per location, and for every
/// pooled scenario a recovery vector within budget whose dislocation at hit
/// locations is at most theta. Recovery variables exist only for hit
/// locations.
Master build_master(const std::vector<TornadoScenario>& scenarios, const Instance& inst);

/// Reads the strategy of every location from a master solution.
RetrofitPlan plan_from_solution(const Master& master, const Instance& inst, const std::vector<double>& x);

struct CcgOptions {
  dbc::SubproblemOptions subproblem;
  double epsilon = 1e-6;
  std::size_t max_iterations = 500;
  /// Initial scenario; all-zeros when absent.
  std::optional<TornadoScenario> seed;
  /// When nonempty, masters go through the external solver bridge.
  std::string solver_cmd;
  milp::MilpOptions master;
  /// Reuse geometry verdicts and lazy conflict sets across iterations.
  bool reuse_conflicts = true;
};

struct IterationRecord {
  std::size_t iteration = 0;
  double lb = 0.0;
  double ub = 0.0;
  double theta = 0.0;        ///< master theta
  double phi = 0.0;          ///< worst case of this iteration's plan
  std::vector<std::size_t> plan;
  double master_time = 0.0;  ///< seconds
  double sub_time = 0.0;     ///< seconds
  std::size_t sub_nodes = 0;
  bool scenario_added = false;
};

struct Timings {
  double master = 0.0;
  double subproblem = 0.0;
  double separation = 0.0;  ///< geometry checks inside the subproblem
  double total = 0.0;
};

struct SolveReport {
  std::string instance_name;
  RetrofitPlan f_star;
  double v = 0.0;  ///< first-stage dislocation plus worst case
  double first_stage = 0.0;
  double phi = 0.0;
  TornadoScenario worst_case = TornadoScenario::none(0);
  second_stage::RecoveryAssignment worst_recovery;
  std::vector<TornadoScenario> scenarios;
  std::vector<second_stage::RecoveryAssignment> recoveries;  ///< per pooled scenario under f_star
  std::vector<IterationRecord> trace;
  Timings timings;
  dbc::Mode mode = dbc::Mode::dec;
  std::size_t subproblem_nodes = 0;
  std::size_t master_nodes = 0;
  std::size_t inconclusive = 0;
  bool converged = false;
};

/// Algorithm loop: master for the lower bound, subproblem for the upper
/// bound, new worst-case scenario into the pool, until the gap closes.
/// Throws std::runtime_error if the master is infeasible.
SolveReport solve(const Instance& inst, const CcgOptions& options = {});

/// Report as JSON; timings are omitted when `with_timings` is false so that
/// repeated runs produce identical bytes.
nlohmann::json report_to_json(const SolveReport& report, const Instance& inst, bool with_timings = true);
/// iteration,LB,UB,master_time,sub_time
std::string bounds_csv(const SolveReport& report, bool with_timings = true);

}  // namespace tornado::ccg
