#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tornado/instance_io.hpp"
#include "tornado/params.hpp"

namespace tornado::params {

std::vector<std::string> validate(const FragilityConfig& cfg) {
  std::vector<std::string> errors;
  const std::size_t D = cfg.damage_states.size();
  if (D == 0) errors.push_back("no damage states");
  if (cfg.repair.size() != D) errors.push_back("repair times must list one entry per damage state");
  for (std::size_t d = 0; d < cfg.repair.size(); ++d) {
    if (!(cfg.repair[d].median_days > 0.0)) errors.push_back("repair median must be positive for state " + std::to_string(d));
    if (!(cfg.repair[d].log_stddev >= 0.0)) errors.push_back("repair log-stddev must be nonnegative for state " + std::to_string(d));
  }
  if (!(cfg.horizon_days > 0.0)) errors.push_back("horizon must be positive");
  if (!(cfg.alpha >= 0.0)) errors.push_back("replacement cost rate must be nonnegative");
  if (cfg.cost_fraction.size() != D) errors.push_back("cost fractions must list one entry per damage state");
  for (double r : cfg.cost_fraction) {
    if (!(r >= 0.0 && r <= 1.0)) errors.push_back("cost fractions must lie in [0,1]");
  }
  if (cfg.strategies.empty()) errors.push_back("no strategies");
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    const auto& st = cfg.strategies[s];
    if (st.damage_probability.size() != D) {
      errors.push_back("strategy " + std::to_string(s) + " must list one probability per damage state");
      continue;
    }
    double sum = 0.0;
    for (double p : st.damage_probability) {
      if (!(p >= 0.0 && p <= 1.0)) errors.push_back("damage probabilities must lie in [0,1] for strategy " + std::to_string(s));
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) errors.push_back("damage probabilities must sum to 1 for strategy " + std::to_string(s));
    if (!(st.retrofit_cost_per_m2 >= 0.0)) errors.push_back("retrofit cost rate must be nonnegative for strategy " + std::to_string(s));
    if (!(st.w_per_person >= 0.0 && st.w_per_person <= 1.0)) errors.push_back("w_per_person must lie in [0,1]");
  }
  if (!cfg.strategies.empty() && cfg.strategies[0].retrofit_cost_per_m2 != 0.0) {
    errors.push_back("do-nothing retrofit cost must be 0");
  }
  if (cfg.mu && !(std::isfinite(*cfg.mu) && *cfg.mu >= 1.0)) errors.push_back("mu must be a finite value of at least 1");
  return errors;
}

FragilityConfig fragility_from_json(const nlohmann::json& j) {
  try {
    FragilityConfig cfg;
    if (j.contains("damage_states")) cfg.damage_states = j.at("damage_states").get<std::vector<std::string>>();
    for (const auto& r : j.at("repair_time")) {
      cfg.repair.push_back({r.at("median_days").get<double>(), r.at("log_stddev").get<double>()});
    }
    for (const auto& s : j.at("strategies")) {
      StrategyFragility st;
      st.name = s.value("name", "");
      st.damage_probability = s.at("damage_probability").get<std::vector<double>>();
      st.retrofit_cost_per_m2 = s.value("retrofit_cost_per_m2", 0.0);
      st.w_per_person = s.value("w_per_person", 0.0);
      cfg.strategies.push_back(std::move(st));
    }
    cfg.horizon_days = j.value("horizon_days", cfg.horizon_days);
    cfg.alpha = j.value("alpha_usd_per_m2", cfg.alpha);
    if (j.contains("cost_fraction")) cfg.cost_fraction = j.at("cost_fraction").get<std::vector<double>>();
    if (j.contains("mu") && !j.at("mu").is_null()) cfg.mu = j.at("mu").get<double>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw model::InputError(std::string("fragility config: ") + e.what());
  }
}

nlohmann::json fragility_to_json(const FragilityConfig& cfg) {
  nlohmann::json j;
  j["damage_states"] = cfg.damage_states;
  j["repair_time"] = nlohmann::json::array();
  for (const auto& r : cfg.repair) j["repair_time"].push_back({{"median_days", r.median_days}, {"log_stddev", r.log_stddev}});
  j["strategies"] = nlohmann::json::array();
  for (const auto& s : cfg.strategies) {
    j["strategies"].push_back({{"name", s.name},
                               {"damage_probability", s.damage_probability},
                               {"retrofit_cost_per_m2", s.retrofit_cost_per_m2},
                               {"w_per_person", s.w_per_person}});
  }
  j["horizon_days"] = cfg.horizon_days;
  j["alpha_usd_per_m2"] = cfg.alpha;
  j["cost_fraction"] = cfg.cost_fraction;
  j["mu"] = cfg.mu ? nlohmann::json(*cfg.mu) : nlohmann::json(nullptr);
  return j;
}

FragilityConfig load_fragility(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw model::InputError("cannot open fragility config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw model::InputError(path.string() + ": " + e.what());
  }
  auto cfg = fragility_from_json(j);
  const auto errors = validate(cfg);
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << path.string() << ":";
    for (const auto& e : errors) msg << "\n  " << e;
    throw model::InputError(msg.str());
  }
  return cfg;
}

double lognormal_cdf(double x, double median, double log_stddev) {
  if (x <= 0.0) return 0.0;
  if (log_stddev == 0.0) return x >= median ? 1.0 : 0.0;
  const double z = (std::log(x) - std::log(median)) / log_stddev;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double prob_still_dislocated(const FragilityConfig& cfg, std::size_t damage_state) {
  const auto& r = cfg.repair.at(damage_state);
  return 1.0 - lognormal_cdf(cfg.horizon_days, r.median_days, r.log_stddev);
}

double dislocation_after_recovery(const FragilityConfig& cfg, std::size_t strategy, double population) {
  const auto& p = cfg.strategies.at(strategy).damage_probability;
  double e = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) e += prob_still_dislocated(cfg, d) * p[d];
  return population * e;
}

double recovery_cost(const FragilityConfig& cfg, std::size_t strategy, double area_m2) {
  const auto& p = cfg.strategies.at(strategy).damage_probability;
  double share = 0.0;
  for (std::size_t d = 0; d < p.size(); ++d) share += cfg.cost_fraction.at(d) * p[d];
  return cfg.alpha * area_m2 * share;
}

double do_nothing_dislocation(double g1, double population, std::optional<double> mu) {
  if (g1 > population) throw std::invalid_argument("do_nothing_dislocation: g1 exceeds population");
  if (!mu) return 0.5 * (g1 + population);
  if (!std::isfinite(*mu) || *mu < 1.0) throw std::invalid_argument("do_nothing_dislocation: mu must be finite and at least 1");
  return std::clamp(*mu * g1, g1, population);
}

}  // namespace tornado::params
