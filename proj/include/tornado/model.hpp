#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tornado/geometry.hpp"

namespace tornado::model {

using geometry::Point2D;
using geometry::Rect;
using geometry::SegmentPath;

/// Money in integer US cents.
using Cents = std::int64_t;

inline constexpr double kCentsPerDollar = 100.0;
Cents to_cents(double usd);
inline double to_dollars(Cents c) { return static_cast<double>(c) / kCentsPerDollar; }

struct Location {
  std::string id;
  Point2D point;
  double population = 0.0;  ///< N, persons
  double area_m2 = 0.0;     ///< R, square meters

  friend bool operator==(const Location&, const Location&) = default;
};

/// Coordinate reference for GeoJSON output. Planar coordinates are miles; an
/// equirectangular anchor maps them back to degrees.
struct Crs {
  bool geographic = false;
  double lat0 = 0.0;
  double lon0 = 0.0;

  friend bool operator==(const Crs&, const Crs&) = default;
};

/// Problem data. Strategy 0 and plan 0 are the do-nothing options.
///
/// Tensors are stored flat: w and d are indexed [l][s], g and c [l][s][p].
struct Instance {
  std::string name;
  Crs crs;
  std::vector<Location> locations;
  std::size_t num_strategies = 1;
  std::size_t num_plans = 1;
  std::vector<double> w_flat;   ///< pre-tornado dislocation, persons
  std::vector<Cents> d_flat;    ///< retrofit cost
  std::vector<double> g_flat;   ///< post-tornado dislocation, persons
  std::vector<Cents> c_flat;    ///< recovery cost
  Cents budget = 0;
  double delta = 1.0;                       ///< tornado half-width, miles
  double max_length = geometry::kInfinity;  ///< E, miles
  Rect region;

  std::size_t size() const { return locations.size(); }
  /// Resizes every tensor to match the location/strategy/plan counts, zero-filled.
  void resize(std::size_t locations, std::size_t strategies, std::size_t plans);

  double& w(std::size_t l, std::size_t s) { return w_flat[l * num_strategies + s]; }
  double w(std::size_t l, std::size_t s) const { return w_flat[l * num_strategies + s]; }
  Cents& d(std::size_t l, std::size_t s) { return d_flat[l * num_strategies + s]; }
  Cents d(std::size_t l, std::size_t s) const { return d_flat[l * num_strategies + s]; }
  double& g(std::size_t l, std::size_t s, std::size_t p) { return g_flat[index(l, s, p)]; }
  double g(std::size_t l, std::size_t s, std::size_t p) const { return g_flat[index(l, s, p)]; }
  Cents& c(std::size_t l, std::size_t s, std::size_t p) { return c_flat[index(l, s, p)]; }
  Cents c(std::size_t l, std::size_t s, std::size_t p) const { return c_flat[index(l, s, p)]; }

  std::vector<Point2D> points() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::size_t index(std::size_t l, std::size_t s, std::size_t p) const {
    return (l * num_strategies + s) * num_plans + p;
  }
};

/// Every violated invariant as a readable message; empty when valid.
std::vector<std::string> validate(const Instance& inst);

/// Throws std::invalid_argument with the joined violations if any.
void require_valid(const Instance& inst);

/// Per-location distance to the farthest corner of R.
struct BigM {
  std::vector<double> m;
};

BigM big_m(const Instance& inst);

/// One retrofit strategy per location, within budget.
class RetrofitPlan {
 public:
  /// Throws std::invalid_argument on a size mismatch, an unknown strategy or
  /// a retrofit cost above the budget.
  RetrofitPlan(const Instance& inst, std::vector<std::size_t> strategy_of);
  /// Empty plan for zero locations.
  RetrofitPlan() = default;

  static RetrofitPlan do_nothing(const Instance& inst);

  std::size_t operator[](std::size_t l) const { return s_of_[l]; }
  std::size_t size() const { return s_of_.size(); }
  const std::vector<std::size_t>& strategies() const { return s_of_; }
  Cents retrofit_cost() const { return cost_; }
  /// Sum of w over the selected strategies.
  double first_stage_dislocation(const Instance& inst) const;

  friend bool operator==(const RetrofitPlan& a, const RetrofitPlan& b) { return a.s_of_ == b.s_of_; }

 private:
  std::vector<std::size_t> s_of_;
  Cents cost_ = 0;
};

/// Coverage vector with an optional witness segment.
class TornadoScenario {
 public:
  /// No location hit.
  static TornadoScenario none(std::size_t num_locations);

  /// Validated scenario. A given witness must cover every active location,
  /// respect E and stay in R; without one, the geometry check supplies it.
  /// Throws std::invalid_argument when the active set is not coverable.
  static TornadoScenario make(const Instance& inst, std::vector<std::uint8_t> z,
                              std::optional<SegmentPath> witness = std::nullopt);

  /// Locations within delta of `seg`. Does not check length or region.
  static TornadoScenario from_segment(const Instance& inst, const SegmentPath& seg);

  /// Unchecked constructor for callers that already hold a certificate.
  TornadoScenario(std::vector<std::uint8_t> z, std::optional<SegmentPath> witness)
      : z_(std::move(z)), witness_(witness) {}

  bool hit(std::size_t l) const { return z_[l] != 0; }
  std::size_t size() const { return z_.size(); }
  const std::vector<std::uint8_t>& z() const { return z_; }
  const std::optional<SegmentPath>& witness() const { return witness_; }
  std::vector<std::size_t> active() const;
  std::size_t hash() const;

  friend bool operator==(const TornadoScenario& a, const TornadoScenario& b) { return a.z_ == b.z_; }

 private:
  std::vector<std::uint8_t> z_;
  std::optional<SegmentPath> witness_;
};

/// True when `seg` covers every active location of `z` and respects E and R.
bool witness_certifies(const Instance& inst, const std::vector<std::uint8_t>& z, const SegmentPath& seg);

}  // namespace tornado::model
