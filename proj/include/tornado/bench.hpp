#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tornado/ccg.hpp"
#include "tornado/dbc.hpp"
#include "tornado/model.hpp"

/// Baselines and experiments around a solved instance.
namespace tornado::bench {

using model::Instance;
using model::RetrofitPlan;

/// Greedy random fill: draws (location, strategy) pairs uniformly, keeps the
/// affordable ones for still-unretrofitted locations, and stops when the
/// allotted share of the budget has no affordable draw left or after
/// `max_attempts` draws (default 100·|L|·|S|).
RetrofitPlan random_retrofit(const Instance& inst, double budget_fraction, std::uint64_t seed,
                             std::size_t max_attempts = 0);

/// Σ w f + Φ(f).
double evaluate_worst_case(const RetrofitPlan& f, const Instance& inst, const dbc::SubproblemOptions& options = {});

enum class LengthLaw { fixed, uniform };

struct SimulationOptions {
  std::size_t replications = 100;
  std::uint64_t seed = 1;
  LengthLaw length = LengthLaw::fixed;
  /// Segments are clipped to the region.
  bool clip = true;
  std::size_t threads = 0;  ///< 0 uses the hardware concurrency
};

struct SimulationSummary {
  double average = 0.0;
  double maximum = 0.0;
  double minimum = 0.0;
  double std_dev = 0.0;  ///< sample standard deviation, 0 for one draw
  std::size_t replications = 0;
  std::uint64_t seed = 0;
};

struct Replication {
  geometry::SegmentPath segment;
  std::size_t hit = 0;
  double dislocation = 0.0;
};

struct SimulationResult {
  SimulationSummary summary;
  std::vector<Replication> draws;
};

SimulationSummary summarize(const std::vector<double>& values, std::uint64_t seed);

/// Random tornado paths: a uniform first endpoint in R, a uniform
/// direction and a length of E (or uniform on [0, E]); an unbounded E uses
/// twice the region diagonal. Each replication draws from its own stream
/// seeded by (seed, index), so results do not depend on the thread count.
SimulationResult simulate_random_tornadoes(const RetrofitPlan& f, const Instance& inst,
                                           const SimulationOptions& options = {});

std::string summary_csv(const std::vector<std::pair<std::string, SimulationSummary>>& rows);
std::string replications_csv(const SimulationResult& result);

struct SweepPoint {
  model::Cents budget = 0;
  double v = 0.0;
  double first_stage = 0.0;
  double phi = 0.0;
  std::vector<std::size_t> plan;
};

/// One solve per budget. Throws std::invalid_argument for unsorted budgets
/// and std::logic_error if v increases with the budget.
std::vector<SweepPoint> budget_sweep(const Instance& inst, const std::vector<model::Cents>& budgets,
                                     const ccg::CcgOptions& options = {});

/// budget_usd,v,first_stage,phi
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace tornado::bench
