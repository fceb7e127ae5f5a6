#include "tornado/dbc.hpp"

namespace tornado::dbc {

Verdict separate(const Instance& inst, const RetrofitPlan& f, double eta, const std::vector<std::uint8_t>& z,
                 FeasibilityCache& cache) {
  Verdict v;
  LocationSet active;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l]) active.push_back(l);
  }
  if (!active.empty()) {
    const auto& cover = cache.check(inst, active);
    if (!cover.feasible()) {
      v.kind = VerdictKind::conflict_cut;
      v.inconclusive = cover.status == geometry::CoverStatus::inconclusive;
      v.conflict = std::move(active);
      return v;
    }
  }
  v.recovery = second_stage::solve_Q(inst, f, z);
  const double tol = 1e-9 * (1.0 + std::abs(v.recovery.objective));
  v.kind = eta > v.recovery.objective + tol ? VerdictKind::recourse_cut : VerdictKind::feasible;
  return v;
}

}  // namespace tornado::dbc
