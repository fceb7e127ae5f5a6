#include "tornado/second_stage.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tornado::second_stage {

double recovery_objective(const Instance& inst, const RetrofitPlan& f, const std::vector<std::uint8_t>& z,
                          const std::vector<std::size_t>& plan_of) {
  double total = 0.0;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l]) total += inst.g(l, f[l], plan_of[l]);
  }
  return total;
}

Cents recovery_spend(const Instance& inst, const RetrofitPlan& f, const std::vector<std::size_t>& plan_of) {
  Cents total = 0;
  for (std::size_t l = 0; l < plan_of.size(); ++l) total += inst.c(l, f[l], plan_of[l]);
  return total;
}

bool recovery_feasible(const Instance& inst, const RetrofitPlan& f, const std::vector<std::size_t>& plan_of) {
  if (plan_of.size() != inst.size()) return false;
  for (auto p : plan_of) {
    if (p >= inst.num_plans) return false;
  }
  return recovery_spend(inst, f, plan_of) <= inst.budget - f.retrofit_cost();
}

namespace {

struct Item {
  std::size_t location;
  std::vector<Cents> cost;   // per plan
  std::vector<double> gain;  // dislocation per plan
};

// Suffix DP: best[i][b] is the least dislocation of items i.. with at most b
// budget units. Reconstruction picks the smallest optimal plan at each step.
std::vector<std::size_t> solve_dp(const std::vector<Item>& items, Cents capacity, Cents unit) {
  const std::size_t n = items.size();
  const auto W = static_cast<std::size_t>(capacity / unit);
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(W + 1, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    const auto& it = items[i];
    auto& row = best[i];
    const auto& next = best[i + 1];
    for (std::size_t b = 0; b <= W; ++b) {
      double v = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < it.cost.size(); ++p) {
        const auto c = static_cast<std::size_t>(it.cost[p] / unit);
        if (c <= b) v = std::min(v, it.gain[p] + next[b - c]);
      }
      row[b] = v;
    }
  }
  std::vector<std::size_t> choice(n, 0);
  std::size_t b = W;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& it = items[i];
    for (std::size_t p = 0; p < it.cost.size(); ++p) {
      const auto c = static_cast<std::size_t>(it.cost[p] / unit);
      if (c <= b && it.gain[p] + best[i + 1][b - c] == best[i][b]) {
        choice[i] = p;
        b -= c;
        break;
      }
    }
  }
  return choice;
}

// Depth-first search in lexicographic plan order with the LP relaxation of
// the remaining multiple-choice knapsack as the bound.
class KnapsackSearch {
 public:
  KnapsackSearch(const std::vector<Item>& items, Cents capacity) : items_(items), capacity_(capacity) {
    hulls_.reserve(items.size());
    for (const auto& it : items) hulls_.push_back(hull(it));
  }

  std::vector<std::size_t> run() {
    const std::size_t n = items_.size();
    current_.assign(n, 0);
    best_.assign(n, 0);
    best_value_ = 0.0;
    for (const auto& it : items_) best_value_ += it.gain[0];
    dfs(0, 0.0, capacity_);
    return best_;
  }

 private:
  struct Step {
    double slope;  // dislocation removed per cent
    Cents cost;
    double drop;
  };

  // Lower convex hull of (cost, gain) starting at plan 0, as increments with
  // decreasing slope.
  static std::vector<Step> hull(const Item& it) {
    std::vector<std::pair<Cents, double>> pts;
    for (std::size_t p = 0; p < it.cost.size(); ++p) pts.emplace_back(it.cost[p], it.gain[p]);
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<Cents, double>> h;
    double base = pts.front().second;
    Cents base_cost = pts.front().first;
    for (const auto& q : pts) {
      if (q.first == base_cost) base = std::min(base, q.second);
    }
    h.emplace_back(base_cost, base);
    for (const auto& q : pts) {
      if (q.second >= h.back().second) continue;
      if (q.first == h.back().first) {
        h.back().second = q.second;
        continue;
      }
      while (h.size() >= 2) {
        const auto& a = h[h.size() - 2];
        const auto& b = h.back();
        const double s1 = (a.second - b.second) / static_cast<double>(b.first - a.first);
        const double s2 = (b.second - q.second) / static_cast<double>(q.first - b.first);
        if (s2 >= s1) h.pop_back();
        else break;
      }
      h.push_back(q);
    }
    std::vector<Step> steps;
    for (std::size_t k = 1; k < h.size(); ++k) {
      const Cents dc = h[k].first - h[k - 1].first;
      const double dg = h[k - 1].second - h[k].second;
      steps.push_back({dg / static_cast<double>(dc), dc, dg});
    }
    return steps;
  }

  double bound(std::size_t from, Cents budget) const {
    double value = 0.0;
    std::vector<Step> steps;
    for (std::size_t i = from; i < items_.size(); ++i) {
      // The hull starts at the cheapest plan; its cost is always paid.
      const auto& it = items_[i];
      Cents min_cost = *std::min_element(it.cost.begin(), it.cost.end());
      double at_min = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < it.cost.size(); ++p) {
        if (it.cost[p] == min_cost) at_min = std::min(at_min, it.gain[p]);
      }
      value += at_min;
      budget -= min_cost;
      steps.insert(steps.end(), hulls_[i].begin(), hulls_[i].end());
    }
    if (budget < 0) return std::numeric_limits<double>::infinity();
    std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.slope > b.slope; });
    for (const auto& s : steps) {
      if (budget <= 0) break;
      if (s.cost <= budget) {
        value -= s.drop;
        budget -= s.cost;
      } else {
        value -= s.slope * static_cast<double>(budget);
        budget = 0;
      }
    }
    return value;
  }

  void dfs(std::size_t i, double value, Cents budget) {
    if (i == items_.size()) {
      if (value < best_value_) {
        best_value_ = value;
        best_ = current_;
      }
      return;
    }
    const double lb = value + bound(i, budget);
    if (lb - 1e-12 * (1.0 + std::abs(lb)) >= best_value_) return;
    const auto& it = items_[i];
    for (std::size_t p = 0; p < it.cost.size(); ++p) {
      if (it.cost[p] > budget) continue;
      current_[i] = p;
      dfs(i + 1, value + it.gain[p], budget - it.cost[p]);
    }
    current_[i] = 0;
  }

  const std::vector<Item>& items_;
  Cents capacity_;
  std::vector<std::vector<Step>> hulls_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_;
  double best_value_ = 0.0;
};

}  // namespace

RecoveryAssignment solve_Q(const Instance& inst, const RetrofitPlan& f, const std::vector<std::uint8_t>& z,
                           const RecoveryOptions& options) {
  if (z.size() != inst.size() || f.size() != inst.size()) {
    throw std::invalid_argument("solve_Q: coverage and plan sizes must match the instance");
  }
  const Cents residual = inst.budget - f.retrofit_cost();
  if (residual < 0) throw std::invalid_argument("solve_Q: retrofit cost exceeds the budget");

  std::vector<Item> items;
  Cents max_total = 0;
  Cents unit = 0;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (!z[l]) continue;
    Item it{l, {}, {}};
    Cents most = 0;
    for (std::size_t p = 0; p < inst.num_plans; ++p) {
      const Cents c = inst.c(l, f[l], p);
      it.cost.push_back(c);
      it.gain.push_back(inst.g(l, f[l], p));
      most = std::max(most, c);
      unit = std::gcd(unit, c);
    }
    max_total += most;
    items.push_back(std::move(it));
  }

  RecoveryAssignment out;
  out.plan_of.assign(inst.size(), 0);
  if (!items.empty()) {
    const Cents capacity = std::min(residual, max_total);
    if (unit == 0) unit = 1;
    const auto table = (items.size() + 1) * (static_cast<std::size_t>(capacity / unit) + 1);
    bool use_dp = options.method == Method::dynamic_programming;
    if (options.method == Method::automatic) {
      use_dp = residual <= options.dp_budget_limit && table <= options.dp_table_limit;
    }
    std::vector<std::size_t> choice;
    if (use_dp) {
      choice = solve_dp(items, capacity, unit);
    } else {
      KnapsackSearch search(items, capacity);
      choice = search.run();
    }
    for (std::size_t i = 0; i < items.size(); ++i) out.plan_of[items[i].location] = choice[i];
  }
  out.objective = recovery_objective(inst, f, z, out.plan_of);
  out.spend = recovery_spend(inst, f, out.plan_of);
  return out;
}

}  // namespace tornado::second_stage
