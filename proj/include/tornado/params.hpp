#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tornado/model.hpp"

/// Builds instance parameters from damage-state fragility data and clusters
/// raw building blocks into locations.
namespace tornado::params {

using geometry::Point2D;

inline constexpr double kDefaultAlpha = 862.0;  ///< replacement cost, USD per m²
inline constexpr std::array<double, 4> kDefaultCostFractions{0.005, 0.023, 0.117, 0.234};
inline const std::vector<std::string> kDefaultDamageStates{"Minor", "Moderate", "Extensive", "Complete"};

/// Lognormal repair time of one damage state.
struct RepairTime {
  double median_days = 1.0;
  double log_stddev = 0.5;  ///< standard deviation of ln(time)
};

struct StrategyFragility {
  std::string name;
  std::vector<double> damage_probability;  ///< P[Y=d | s], one per damage state
  double retrofit_cost_per_m2 = 0.0;       ///< USD per m² of location area
  double w_per_person = 0.0;               ///< pre-tornado dislocation share
};

struct FragilityConfig {
  std::vector<std::string> damage_states = kDefaultDamageStates;
  std::vector<RepairTime> repair;
  std::vector<StrategyFragility> strategies;  ///< strategy 0 is do-nothing
  double horizon_days = 60.0;
  double alpha = kDefaultAlpha;
  std::vector<double> cost_fraction{kDefaultCostFractions.begin(), kDefaultCostFractions.end()};
  /// Do-nothing factor; the midpoint rule when absent.
  std::optional<double> mu;
};

/// Human-readable violations; empty when the config is usable.
std::vector<std::string> validate(const FragilityConfig& cfg);

FragilityConfig fragility_from_json(const nlohmann::json& j);
nlohmann::json fragility_to_json(const FragilityConfig& cfg);
/// Parses and validates; throws model::InputError.
FragilityConfig load_fragility(const std::filesystem::path& path);

/// P[T ≤ x] for T lognormal with the given median and log-stddev. A zero
/// log-stddev is a step at the median.
double lognormal_cdf(double x, double median, double log_stddev);

/// P[X=1 | Y=d]: repair not finished by the horizon.
double prob_still_dislocated(const FragilityConfig& cfg, std::size_t damage_state);

/// N · Σ_d P[X=1|d] P[d|s].
double dislocation_after_recovery(const FragilityConfig& cfg, std::size_t strategy, double population);

/// α · area · Σ_d r_d P[d|s], in USD.
double recovery_cost(const FragilityConfig& cfg, std::size_t strategy, double area_m2);

/// (g1 + N) / 2 without mu; otherwise mu · g1 clamped to [g1, N]. Throws
/// std::invalid_argument when g1 > N or when mu is below 1 or not finite.
double do_nothing_dislocation(double g1, double population, std::optional<double> mu = std::nullopt);

struct RawBlock {
  std::string id;
  Point2D point;
  double population = 0.0;
  double area_m2 = 0.0;
};

/// id,x,y,population,area_m2 or id,lat,lon,population,area_m2. Geographic
/// rows are projected about their centroid, which is stored in `crs`.
std::vector<RawBlock> load_blocks_csv(const std::filesystem::path& path, model::Crs* crs = nullptr);

struct ClusterResult {
  std::vector<model::Location> locations;
  std::vector<std::size_t> assignment;  ///< cluster per block
  double sse = 0.0;                     ///< within-cluster squared distance
  std::size_t iterations = 0;
};

/// Lloyd's k-means with k-means++ seeding. Centroids are population
/// weighted (plain mean for an all-zero cluster); an emptied cluster is
/// re-seeded at the block farthest from its centroid.
ClusterResult cluster_blocks(const std::vector<RawBlock>& blocks, std::size_t k, std::uint64_t seed,
                             std::size_t max_iterations = 500);

/// Within-cluster sum of squared distances for a given assignment.
double clustering_sse(const std::vector<RawBlock>& blocks, const std::vector<std::size_t>& assignment,
                      std::size_t k);

struct PipelineOptions {
  std::string name = "generated";
  std::size_t clusters = 0;  ///< 0 keeps one location per block
  std::uint64_t seed = 1;
  double delta = 1.0;
  double max_length = geometry::kInfinity;
  model::Cents budget = 0;
};

/// Instance with plans {do-nothing, recover}: g1 and c1 from the fragility
/// data, g0 by the do-nothing rule, c0 = 0, d from the retrofit rate, w from
/// the per-person share. The region is the bounding box grown by delta.
model::Instance build_instance(const std::vector<RawBlock>& blocks, const FragilityConfig& cfg,
                               const PipelineOptions& options, const model::Crs& crs = {});

}  // namespace tornado::params
