#include "tornado/milp.hpp"

#include <algorithm>
#include <cmath>

namespace tornado::milp {

std::size_t Model::add_variable(std::string name, VarKind kind, double lower, double upper) {
  if (kind == VarKind::binary) {
    lower = 0.0;
    upper = 1.0;
  }
  const std::size_t j = vars_.size();
  if (!index_.emplace(name, j).second) throw std::invalid_argument("duplicate variable name " + name);
  vars_.push_back({std::move(name), kind, lower, upper});
  return j;
}

std::size_t Model::add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs) {
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
  return rows_.size() - 1;
}

void Model::set_objective(ObjSense sense, std::vector<Term> terms, double constant) {
  sense_ = sense;
  obj_ = std::move(terms);
  obj_const_ = constant;
}

std::size_t Model::num_integer() const {
  return static_cast<std::size_t>(std::count_if(vars_.begin(), vars_.end(),
                                                [](const Variable& v) { return v.kind != VarKind::continuous; }));
}

std::optional<std::size_t> Model::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double Model::evaluate(std::span<const double> x) const {
  double v = obj_const_;
  for (const auto& t : obj_) v += t.coef * x[t.var];
  return v;
}

double Model::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lower - x[j], x[j] - vars_[j].upper});
    if (vars_[j].kind != VarKind::continuous) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  }
  for (const auto& r : rows_) {
    double a = 0.0;
    for (const auto& t : r.terms) a += t.coef * x[t.var];
    switch (r.sense) {
      case RowSense::le: worst = std::max(worst, a - r.rhs); break;
      case RowSense::ge: worst = std::max(worst, r.rhs - a); break;
      case RowSense::eq: worst = std::max(worst, std::abs(a - r.rhs)); break;
    }
  }
  return worst;
}

void Model::validate() const {
  for (const auto& v : vars_) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      throw std::invalid_argument("variable " + v.name + " has invalid bounds");
    }
  }
  auto check_terms = [&](const std::vector<Term>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var >= vars_.size()) throw std::invalid_argument(where + " references an unknown variable");
      if (!std::isfinite(t.coef)) throw std::invalid_argument(where + " has a non-finite coefficient");
    }
  };
  check_terms(obj_, "objective");
  if (!std::isfinite(obj_const_)) throw std::invalid_argument("objective constant is not finite");
  for (const auto& r : rows_) {
    check_terms(r.terms, "constraint " + r.name);
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("constraint " + r.name + " has a non-finite rhs");
  }
}

const char* to_string(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::node_limit: return "node_limit";
  }
  return "unknown";
}

}  // namespace tornado::milp
