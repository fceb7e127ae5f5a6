#include "tornado/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace tornado::model {

Cents to_cents(double usd) { return static_cast<Cents>(std::llround(usd * kCentsPerDollar)); }

void Instance::resize(std::size_t locations_count, std::size_t strategies, std::size_t plans) {
  locations.resize(locations_count);
  num_strategies = strategies;
  num_plans = plans;
  w_flat.assign(locations_count * strategies, 0.0);
  d_flat.assign(locations_count * strategies, 0);
  g_flat.assign(locations_count * strategies * plans, 0.0);
  c_flat.assign(locations_count * strategies * plans, 0);
}

std::vector<Point2D> Instance::points() const {
  std::vector<Point2D> out;
  out.reserve(locations.size());
  for (const auto& loc : locations) out.push_back(loc.point);
  return out;
}

namespace {

template <typename... Ts>
std::string cat(const Ts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const std::size_t L = inst.size();
  const std::size_t S = inst.num_strategies;
  const std::size_t P = inst.num_plans;
  if (S == 0) out.push_back("num_strategies must be at least 1");
  if (P == 0) out.push_back("num_plans must be at least 1");
  if (inst.w_flat.size() != L * S || inst.d_flat.size() != L * S) {
    out.push_back(cat("w and d must hold ", L * S, " entries"));
  }
  if (inst.g_flat.size() != L * S * P || inst.c_flat.size() != L * S * P) {
    out.push_back(cat("g and c must hold ", L * S * P, " entries"));
  }
  if (!out.empty()) return out;

  if (!(inst.delta > 0.0) || !std::isfinite(inst.delta)) out.push_back("delta must be positive and finite");
  if (!(inst.max_length >= 0.0)) out.push_back("max_length must be nonnegative");
  if (inst.budget < 0) out.push_back("budget must be nonnegative");
  if (!(inst.region.x_min <= inst.region.x_max && inst.region.y_min <= inst.region.y_max)) {
    out.push_back("rectangle bounds are inverted");
  }

  for (std::size_t l = 0; l < L; ++l) {
    const auto& loc = inst.locations[l];
    if (!std::isfinite(loc.point.x) || !std::isfinite(loc.point.y)) {
      out.push_back(cat("coordinates must be finite at ℓ=", l));
    } else if (!inst.region.contains(loc.point)) {
      out.push_back(cat("location outside rectangle at ℓ=", l));
    }
    if (!(loc.population >= 0.0)) out.push_back(cat("population must be nonnegative at ℓ=", l));
    if (!(loc.area_m2 >= 0.0)) out.push_back(cat("area must be nonnegative at ℓ=", l));
    if (inst.d(l, 0) != 0) out.push_back(cat("do-nothing retrofit cost must be 0 at ℓ=", l));
    for (std::size_t s = 0; s < S; ++s) {
      if (inst.d(l, s) < 0) out.push_back(cat("retrofit cost must be nonnegative at (", l, ",", s, ")"));
      if (!(inst.w(l, s) >= 0.0)) out.push_back(cat("pre-tornado dislocation must be nonnegative at (", l, ",", s, ")"));
      if (inst.c(l, s, 0) != 0) {
        out.push_back(cat("do-nothing recovery cost must be 0 at (", l, ",", s, ")"));
      }
      for (std::size_t p = 0; p < P; ++p) {
        const double g = inst.g(l, s, p);
        if (!(g >= 0.0)) out.push_back(cat("dislocation must be nonnegative at (", l, ",", s, ",", p, ")"));
        if (g > loc.population) out.push_back(cat("dislocation exceeds population at (", l, ",", s, ",", p, ")"));
        if (inst.c(l, s, p) < 0) out.push_back(cat("recovery cost must be nonnegative at (", l, ",", s, ",", p, ")"));
      }
    }
  }
  return out;
}

void require_valid(const Instance& inst) {
  const auto errors = validate(inst);
  if (errors.empty()) return;
  std::string msg = "invalid instance:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw std::invalid_argument(msg);
}

BigM big_m(const Instance& inst) {
  BigM out;
  out.m.reserve(inst.size());
  const auto corners = inst.region.corners();
  for (const auto& loc : inst.locations) {
    double m = 0.0;
    for (const auto& c : corners) m = std::max(m, geometry::distance(loc.point, c));
    out.m.push_back(m);
  }
  return out;
}

RetrofitPlan::RetrofitPlan(const Instance& inst, std::vector<std::size_t> strategy_of)
    : s_of_(std::move(strategy_of)) {
  if (s_of_.size() != inst.size()) throw std::invalid_argument("retrofit plan size does not match locations");
  for (std::size_t l = 0; l < s_of_.size(); ++l) {
    if (s_of_[l] >= inst.num_strategies) {
      throw std::invalid_argument(cat("unknown strategy ", s_of_[l], " at ℓ=", l));
    }
    cost_ += inst.d(l, s_of_[l]);
  }
  if (cost_ > inst.budget) {
    throw std::invalid_argument(cat("retrofit cost ", cost_, " cents exceeds budget ", inst.budget));
  }
}

RetrofitPlan RetrofitPlan::do_nothing(const Instance& inst) {
  return RetrofitPlan(inst, std::vector<std::size_t>(inst.size(), 0));
}

double RetrofitPlan::first_stage_dislocation(const Instance& inst) const {
  double total = 0.0;
  for (std::size_t l = 0; l < s_of_.size(); ++l) total += inst.w(l, s_of_[l]);
  return total;
}

TornadoScenario TornadoScenario::none(std::size_t num_locations) {
  return TornadoScenario(std::vector<std::uint8_t>(num_locations, 0), std::nullopt);
}

bool witness_certifies(const Instance& inst, const std::vector<std::uint8_t>& z, const SegmentPath& seg) {
  if (!inst.region.contains(seg.e0) || !inst.region.contains(seg.e1)) return false;
  if (seg.length() > inst.max_length + geometry::kTolerance) return false;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l] && geometry::point_segment_distance(inst.locations[l].point, seg).distance >
                    inst.delta + geometry::kTolerance) {
      return false;
    }
  }
  return true;
}

TornadoScenario TornadoScenario::make(const Instance& inst, std::vector<std::uint8_t> z,
                                      std::optional<SegmentPath> witness) {
  if (z.size() != inst.size()) throw std::invalid_argument("coverage vector size does not match locations");
  if (witness) {
    if (!witness_certifies(inst, z, *witness)) {
      throw std::invalid_argument("witness segment does not certify the coverage vector");
    }
    return TornadoScenario(std::move(z), witness);
  }
  std::vector<Point2D> active;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l]) active.push_back(inst.locations[l].point);
  }
  const auto res = geometry::segment_cover_feasible(active, inst.delta, inst.max_length, inst.region);
  if (!res.feasible()) throw std::invalid_argument("coverage vector is not realizable by any tornado path");
  return TornadoScenario(std::move(z), res.witness);
}

TornadoScenario TornadoScenario::from_segment(const Instance& inst, const SegmentPath& seg) {
  std::vector<std::uint8_t> z(inst.size(), 0);
  for (std::size_t l = 0; l < inst.size(); ++l) {
    z[l] = geometry::point_segment_distance(inst.locations[l].point, seg).distance <= inst.delta ? 1 : 0;
  }
  return TornadoScenario(std::move(z), seg);
}

std::vector<std::size_t> TornadoScenario::active() const {
  std::vector<std::size_t> out;
  for (std::size_t l = 0; l < z_.size(); ++l) {
    if (z_[l]) out.push_back(l);
  }
  return out;
}

std::size_t TornadoScenario::hash() const {
  const std::string_view bytes(reinterpret_cast<const char*>(z_.data()), z_.size());
  return std::hash<std::string_view>{}(bytes);
}

}  // namespace tornado::model
