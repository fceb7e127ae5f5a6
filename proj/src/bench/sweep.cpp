#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "tornado/bench.hpp"

namespace tornado::bench {

std::vector<SweepPoint> budget_sweep(const Instance& inst, const std::vector<model::Cents>& budgets,
                                     const ccg::CcgOptions& options) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw std::invalid_argument("budget_sweep: budgets must be ascending");
  }
  std::vector<SweepPoint> curve;
  for (auto budget : budgets) {
    Instance copy = inst;
    copy.budget = budget;
    const auto report = ccg::solve(copy, options);
    SweepPoint p{budget, report.v, report.first_stage, report.phi, report.f_star.strategies()};
    if (!curve.empty() && p.v > curve.back().v + options.epsilon) {
      std::ostringstream msg;
      msg << "budget_sweep: v rose from " << curve.back().v << " to " << p.v << " at budget " << budget;
      throw std::logic_error(msg.str());
    }
    curve.push_back(std::move(p));
  }
  return curve;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out.precision(17);
  out << "budget_usd,v,first_stage,phi\n";
  for (const auto& p : points) {
    out << model::to_dollars(p.budget) << ',' << p.v << ',' << p.first_stage << ',' << p.phi << '\n';
  }
  return out.str();
}

}  // namespace tornado::bench
