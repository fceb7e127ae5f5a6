#pragma once

#include <cstdint>
#include <vector>

#include "tornado/model.hpp"

/// Recovery problem after a tornado: pick one recovery plan per location to
/// minimize the dislocation at hit locations within the residual budget.
namespace tornado::second_stage {

using model::Cents;
using model::Instance;
using model::RetrofitPlan;

struct RecoveryAssignment {
  std::vector<std::size_t> plan_of;  ///< per location, 0 when not hit
  double objective = 0.0;            ///< persons, summed over hit locations
  Cents spend = 0;

  friend bool operator==(const RecoveryAssignment&, const RecoveryAssignment&) = default;
};

enum class Method { automatic, dynamic_programming, branch_and_bound };

struct RecoveryOptions {
  Method method = Method::automatic;
  /// Residual budgets above this many cents go to branch-and-bound.
  Cents dp_budget_limit = 10'000'000;
  /// Largest DP table (entries) before falling back to branch-and-bound.
  std::size_t dp_table_limit = 8'000'000;
};

/// Exact minimizer; among optimal assignments the lexicographically smallest
/// plan vector is returned. Throws std::invalid_argument if `f` alone
/// exceeds the budget or `z` has the wrong size.
RecoveryAssignment solve_Q(const Instance& inst, const RetrofitPlan& f, const std::vector<std::uint8_t>& z,
                           const RecoveryOptions& options = {});

/// Objective of `plan_of` under coverage `z`, summed in location order.
double recovery_objective(const Instance& inst, const RetrofitPlan& f, const std::vector<std::uint8_t>& z,
                          const std::vector<std::size_t>& plan_of);

Cents recovery_spend(const Instance& inst, const RetrofitPlan& f, const std::vector<std::size_t>& plan_of);

/// Plan indices in range and total spend within the residual budget.
bool recovery_feasible(const Instance& inst, const RetrofitPlan& f, const std::vector<std::size_t>& plan_of);

}  // namespace tornado::second_stage
