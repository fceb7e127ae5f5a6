#include <charconv>
#include <sstream>

#include "tornado/ccg.hpp"

namespace tornado::ccg {

namespace {

nlohmann::json segment_json(const geometry::SegmentPath& s) {
  return {{"e0", {s.e0.x, s.e0.y}}, {"e1", {s.e1.x, s.e1.y}}};
}

nlohmann::json scenario_json(const TornadoScenario& z, const Instance& inst) {
  nlohmann::json ids = nlohmann::json::array();
  for (auto l : z.active()) ids.push_back(inst.locations[l].id);
  nlohmann::json j{{"hit", ids}};
  j["witness"] = z.witness() ? segment_json(*z.witness()) : nlohmann::json(nullptr);
  return j;
}

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

nlohmann::json report_to_json(const SolveReport& report, const Instance& inst, bool with_timings) {
  nlohmann::json j;
  j["instance"] = report.instance_name;
  j["mode"] = dbc::to_string(report.mode);
  j["converged"] = report.converged;
  j["objective"] = report.v;
  j["first_stage_dislocation"] = report.first_stage;
  j["worst_case_dislocation"] = report.phi;
  j["retrofit_cost_cents"] = report.f_star.retrofit_cost();

  nlohmann::json plan = nlohmann::json::array();
  for (std::size_t l = 0; l < report.f_star.size(); ++l) {
    plan.push_back({{"id", inst.locations[l].id}, {"strategy", report.f_star[l]}});
  }
  j["plan"] = std::move(plan);

  auto worst = scenario_json(report.worst_case, inst);
  nlohmann::json recovery = nlohmann::json::array();
  for (auto l : report.worst_case.active()) {
    recovery.push_back({{"id", inst.locations[l].id}, {"plan", report.worst_recovery.plan_of[l]}});
  }
  worst["recovery"] = std::move(recovery);
  worst["recovery_spend_cents"] = report.worst_recovery.spend;
  j["worst_case"] = std::move(worst);

  nlohmann::json scenarios = nlohmann::json::array();
  for (std::size_t i = 0; i < report.scenarios.size(); ++i) {
    auto s = scenario_json(report.scenarios[i], inst);
    if (i < report.recoveries.size()) s["dislocation"] = report.recoveries[i].objective;
    scenarios.push_back(std::move(s));
  }
  j["scenarios"] = std::move(scenarios);

  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& r : report.trace) {
    nlohmann::json it{{"iteration", r.iteration}, {"lb", r.lb},         {"ub", r.ub},
                      {"theta", r.theta},         {"phi", r.phi},       {"plan", r.plan},
                      {"subproblem_nodes", r.sub_nodes}, {"scenario_added", r.scenario_added}};
    if (with_timings) {
      it["master_time"] = r.master_time;
      it["sub_time"] = r.sub_time;
    }
    iterations.push_back(std::move(it));
  }
  j["iterations"] = std::move(iterations);
  j["counts"] = {{"subproblem_nodes", report.subproblem_nodes},
                 {"master_nodes", report.master_nodes},
                 {"inconclusive_geometry", report.inconclusive}};
  if (with_timings) {
    j["timings"] = {{"master", report.timings.master},
                    {"subproblem", report.timings.subproblem},
                    {"separation", report.timings.separation},
                    {"total", report.timings.total}};
  }
  return j;
}

std::string bounds_csv(const SolveReport& report, bool with_timings) {
  std::ostringstream out;
  out << "iteration,LB,UB,master_time,sub_time\n";
  for (const auto& r : report.trace) {
    out << r.iteration << ',' << num(r.lb) << ',' << num(r.ub) << ','
        << (with_timings ? num(r.master_time) : std::string("0")) << ','
        << (with_timings ? num(r.sub_time) : std::string("0")) << '\n';
  }
  return out.str();
}

}  // namespace tornado::ccg
