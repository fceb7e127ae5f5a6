#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "tornado/geometry.hpp"
#include "tornado/model.hpp"
#include "tornado/params.hpp"

/// Brute-force references used by the unit tests and the acceptance run.
namespace oracle {

using tornado::geometry::Point2D;
using tornado::model::Instance;
using tornado::model::RetrofitPlan;

struct RandomSpec {
  std::size_t locations = 6;
  std::size_t strategies = 2;
  std::size_t plans = 2;
  double box = 6.0;  ///< points uniform in [0, box]^2
  double delta_lo = 0.4;
  double delta_hi = 1.2;
  bool finite_length = true;
  double length_hi = 4.0;
  std::uint32_t max_population = 100;
};

/// Integer persons and whole-dollar costs; R is the bounding box grown by delta.
Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec);

/// min over recovery vectors within the residual budget, by enumeration.
double brute_Q(const Instance& inst, const RetrofitPlan& f, const std::vector<std::uint8_t>& z);

/// Coverability of every active set (bit l set = location l hit), decided by
/// the segment feasibility check.
std::vector<bool> coverable_masks(const Instance& inst);

std::vector<std::uint8_t> mask_to_z(std::uint64_t mask, std::size_t n);

/// max over coverable z of brute_Q.
double brute_phi(const Instance& inst, const RetrofitPlan& f, const std::vector<bool>& coverable);

struct Enumerated {
  double v = 0.0;
  std::vector<std::size_t> plan;
};

/// min over every affordable first-stage vector of Σ w f + brute_phi.
Enumerated brute_v(const Instance& inst, const std::vector<bool>& coverable);

/// Width of the thinnest strip containing all points, by an angle sweep with
/// local refinement.
double min_strip_width(const std::vector<Point2D>& pts);

/// Largest number of radius-delta disks met by one line: angle sweep plus the
/// pair-critical angles, exact best offset window at each angle.
std::size_t max_stabbed(const std::vector<Point2D>& centers, double delta);

/// Same count at one angle; used to classify near-ties.
std::size_t stabbed_at(const std::vector<Point2D>& centers, double delta, double angle, double slack);

/// Fragility data matching data/fragility_illustrative.json.
tornado::params::FragilityConfig illustrative_fragility();

/// Ten random blocks in a 3 x 3 mile square run through the parameter
/// pipeline with four strategies; one sample of the mode comparison testbed.
Instance testbed_instance(std::uint64_t seed);

}  // namespace oracle
