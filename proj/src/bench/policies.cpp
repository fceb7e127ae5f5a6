#include <cmath>
#include <random>
#include <stdexcept>

#include "tornado/bench.hpp"

namespace tornado::bench {

RetrofitPlan random_retrofit(const Instance& inst, double budget_fraction, std::uint64_t seed,
                             std::size_t max_attempts) {
  if (!(budget_fraction >= 0.0 && budget_fraction <= 1.0)) {
    throw std::invalid_argument("random_retrofit: budget fraction must lie in [0,1]");
  }
  const std::size_t L = inst.size();
  const std::size_t S = inst.num_strategies;
  std::vector<std::size_t> s_of(L, 0);
  if (L == 0 || S < 2) return RetrofitPlan(inst, s_of);
  if (max_attempts == 0) max_attempts = 100 * L * S;

  auto remaining = static_cast<model::Cents>(std::floor(budget_fraction * static_cast<double>(inst.budget)));
  auto any_affordable = [&] {
    for (std::size_t l = 0; l < L; ++l) {
      if (s_of[l] != 0) continue;
      for (std::size_t s = 1; s < S; ++s) {
        if (inst.d(l, s) <= remaining) return true;
      }
    }
    return false;
  };

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_l(0, L - 1);
  std::uniform_int_distribution<std::size_t> pick_s(1, S - 1);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    if (attempt % L == 0 && !any_affordable()) break;
    const auto l = pick_l(rng);
    const auto s = pick_s(rng);
    if (s_of[l] != 0 || inst.d(l, s) > remaining) continue;
    s_of[l] = s;
    remaining -= inst.d(l, s);
  }
  return RetrofitPlan(inst, std::move(s_of));
}

double evaluate_worst_case(const RetrofitPlan& f, const Instance& inst, const dbc::SubproblemOptions& options) {
  return f.first_stage_dislocation(inst) + dbc::solve_phi(inst, f, options).phi;
}

}  // namespace tornado::bench
