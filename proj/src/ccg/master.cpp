#include "tornado/ccg.hpp"

#include <string>

namespace tornado::ccg {

Master build_master(const std::vector<TornadoScenario>& scenarios, const Instance& inst) {
  if (scenarios.empty()) throw std::invalid_argument("build_master: empty scenario pool");
  const std::size_t L = inst.size();
  const std::size_t S = inst.num_strategies;
  const std::size_t P = inst.num_plans;
  const auto budget = static_cast<double>(inst.budget);

  Master m;
  auto& model = m.model;
  m.f_var.resize(L * S);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t s = 0; s < S; ++s) {
      m.f_var[l * S + s] =
          model.add_variable("f_" + std::to_string(l) + "_" + std::to_string(s), milp::VarKind::binary);
    }
  }
  m.theta_var = model.add_variable("theta", milp::VarKind::continuous, 0.0, milp::kInf);

  std::vector<milp::Term> retrofit;
  for (std::size_t l = 0; l < L; ++l) {
    std::vector<milp::Term> one;
    for (std::size_t s = 0; s < S; ++s) {
      one.push_back({m.f_var[l * S + s], 1.0});
      if (inst.d(l, s) != 0) retrofit.push_back({m.f_var[l * S + s], static_cast<double>(inst.d(l, s))});
    }
    model.add_constraint("assign_" + std::to_string(l), std::move(one), milp::RowSense::eq, 1.0);
  }
  model.add_constraint("budget", retrofit, milp::RowSense::le, budget);

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& z = scenarios[i];
    const std::string tag = std::to_string(i);
    std::vector<milp::Term> dislocation{{m.theta_var, 1.0}};
    std::vector<milp::Term> spend = retrofit;
    for (std::size_t l = 0; l < L; ++l) {
      if (!z.hit(l)) continue;
      for (std::size_t s = 0; s < S; ++s) {
        std::vector<milp::Term> pick{{m.f_var[l * S + s], -1.0}};
        for (std::size_t p = 0; p < P; ++p) {
          const auto r = model.add_variable(
              "r_" + tag + "_" + std::to_string(l) + "_" + std::to_string(s) + "_" + std::to_string(p),
              milp::VarKind::binary);
          pick.push_back({r, 1.0});
          if (inst.g(l, s, p) != 0.0) dislocation.push_back({r, -inst.g(l, s, p)});
          if (inst.c(l, s, p) != 0) spend.push_back({r, static_cast<double>(inst.c(l, s, p))});
        }
        model.add_constraint("plan_" + tag + "_" + std::to_string(l) + "_" + std::to_string(s), std::move(pick),
                             milp::RowSense::eq, 0.0);
      }
    }
    model.add_constraint("theta_" + tag, std::move(dislocation), milp::RowSense::ge, 0.0);
    model.add_constraint("budget_" + tag, std::move(spend), milp::RowSense::le, budget);
  }

  std::vector<milp::Term> obj{{m.theta_var, 1.0}};
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t s = 0; s < S; ++s) {
      if (inst.w(l, s) != 0.0) obj.push_back({m.f_var[l * S + s], inst.w(l, s)});
    }
  }
  model.set_objective(milp::ObjSense::minimize, std::move(obj));
  return m;
}

RetrofitPlan plan_from_solution(const Master& master, const Instance& inst, const std::vector<double>& x) {
  const std::size_t S = inst.num_strategies;
  std::vector<std::size_t> s_of(inst.size(), 0);
  for (std::size_t l = 0; l < inst.size(); ++l) {
    double best = -1.0;
    for (std::size_t s = 0; s < S; ++s) {
      const double v = x[master.f_var[l * S + s]];
      if (v > best + 1e-9) {
        best = v;
        s_of[l] = s;
      }
    }
  }
  return RetrofitPlan(inst, std::move(s_of));
}

}  // namespace tornado::ccg
