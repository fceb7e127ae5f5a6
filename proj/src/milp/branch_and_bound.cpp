#include <algorithm>
#include <cmath>
#include <queue>

#include "tornado/milp.hpp"

namespace tornado::milp {

namespace {

struct Node {
  double bound;  // in minimization sense
  std::size_t depth;
  std::size_t order;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.order > b.order;
  }
};

}  // namespace

MilpResult solve_embedded(const Model& model, const MilpOptions& options) {
  model.validate();
  if (model.num_integer() > options.max_integer_vars) {
    throw NeedsExternalSolver("model has " + std::to_string(model.num_integer()) +
                              " integer variables; needs external solver");
  }
  const double sign = model.sense() == ObjSense::maximize ? -1.0 : 1.0;
  const auto& vars = model.variables();
  const std::size_t n = vars.size();

  MilpResult res;
  double incumbent = kInf;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  Node root{-kInf, 0, 0, {}, {}};
  root.lower.resize(n);
  root.upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    root.lower[j] = vars[j].lower;
    root.upper[j] = vars[j].upper;
    if (vars[j].kind != VarKind::continuous) {
      root.lower[j] = std::ceil(root.lower[j] - options.integrality_tolerance);
      root.upper[j] = std::floor(root.upper[j] + options.integrality_tolerance);
    }
  }
  open.push(std::move(root));
  std::size_t order = 1;
  bool unbounded = false;

  while (!open.empty()) {
    if (res.nodes >= options.max_nodes) {
      res.status = Status::node_limit;
      return res;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - options.absolute_gap) continue;
    ++res.nodes;

    const LpResult lp = solve_lp(model, node.lower, node.upper, options.lp);
    res.lp_iterations += lp.iterations;
    if (lp.status == Status::infeasible) continue;
    if (lp.status == Status::unbounded) {
      unbounded = true;
      break;
    }
    if (lp.status != Status::optimal) {
      res.status = lp.status;
      return res;
    }
    const double bound = sign * lp.objective;
    if (bound >= incumbent - options.absolute_gap) continue;

    std::size_t branch = n;
    double most = options.integrality_tolerance;
    for (std::size_t j = 0; j < n; ++j) {
      if (vars[j].kind == VarKind::continuous) continue;
      const double frac = std::abs(lp.x[j] - std::round(lp.x[j]));
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch == n) {
      std::vector<double> x = lp.x;
      for (std::size_t j = 0; j < n; ++j) {
        if (vars[j].kind != VarKind::continuous) x[j] = std::round(x[j]);
      }
      incumbent = bound;
      res.x = std::move(x);
      res.objective = model.evaluate(res.x);
      continue;
    }

    const double v = lp.x[branch];
    Node down{bound, node.depth + 1, order++, node.lower, node.upper};
    down.upper[branch] = std::floor(v);
    Node up{bound, node.depth + 1, order++, std::move(node.lower), std::move(node.upper)};
    up.lower[branch] = std::ceil(v);
    open.push(std::move(down));
    open.push(std::move(up));
  }

  if (unbounded) {
    res.status = Status::unbounded;
    return res;
  }
  res.status = res.x.empty() ? Status::infeasible : Status::optimal;
  return res;
}

MilpResult solve_by_enumeration(const Model& model) {
  model.validate();
  const auto& vars = model.variables();
  std::vector<std::size_t> ints;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (vars[j].kind == VarKind::continuous) continue;
    if (!std::isfinite(vars[j].lower) || !std::isfinite(vars[j].upper)) {
      throw std::invalid_argument("enumeration needs finite integer bounds");
    }
    ints.push_back(j);
  }
  const bool has_continuous = ints.size() < vars.size();
  const double sign = model.sense() == ObjSense::maximize ? -1.0 : 1.0;

  MilpResult res;
  double best = kInf;
  std::vector<double> lower(vars.size());
  std::vector<double> upper(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    lower[j] = vars[j].lower;
    upper[j] = vars[j].upper;
  }
  std::vector<double> value(ints.size());
  for (std::size_t k = 0; k < ints.size(); ++k) value[k] = std::ceil(vars[ints[k]].lower);

  while (true) {
    for (std::size_t k = 0; k < ints.size(); ++k) lower[ints[k]] = upper[ints[k]] = value[k];
    ++res.nodes;
    if (has_continuous) {
      const LpResult lp = solve_lp(model, lower, upper);
      if (lp.status == Status::unbounded) {
        res.status = Status::unbounded;
        return res;
      }
      if (lp.status == Status::optimal && sign * lp.objective < best) {
        best = sign * lp.objective;
        res.x = lp.x;
        for (std::size_t k = 0; k < ints.size(); ++k) res.x[ints[k]] = value[k];
      }
    } else {
      std::vector<double> x(vars.size());
      for (std::size_t k = 0; k < ints.size(); ++k) x[ints[k]] = value[k];
      if (model.max_violation(x) <= 1e-9 && sign * model.evaluate(x) < best) {
        best = sign * model.evaluate(x);
        res.x = std::move(x);
      }
    }
    std::size_t k = 0;
    while (k < ints.size() && value[k] + 1.0 > std::floor(vars[ints[k]].upper)) {
      value[k] = std::ceil(vars[ints[k]].lower);
      ++k;
    }
    if (k == ints.size()) break;
    value[k] += 1.0;
  }
  if (res.x.empty()) {
    res.status = Status::infeasible;
  } else {
    res.status = Status::optimal;
    res.objective = model.evaluate(res.x);
  }
  return res;
}

}  // namespace tornado::milp
