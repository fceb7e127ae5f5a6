#include "tornado/geometry.hpp"

#include <numbers>
#include <stdexcept>
#include <utility>

namespace tornado::geometry {

std::vector<ConflictPair> infeasible_pairs(std::span<const Point2D> locations, double delta,
                                           double max_length) {
  if (!(delta > 0.0)) throw std::invalid_argument("infeasible_pairs: delta must be positive");
  std::vector<ConflictPair> out;
  if (std::isinf(max_length)) return out;
  const double reach = 2.0 * delta + max_length;
  for (std::size_t i = 0; i < locations.size(); ++i) {
    for (std::size_t j = i + 1; j < locations.size(); ++j) {
      if (distance(locations[i], locations[j]) > reach + kTolerance) out.push_back({{i, j}});
    }
  }
  return out;
}

namespace {

// Rotation keeps tan() away from its poles when the slope interval
// [theta - alpha, theta + alpha] would reach +-pi/2.
constexpr double kPoleGuard = 1e-3;

Point2D rotate_about(Point2D p, Point2D pivot, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point2D v = p - pivot;
  return {pivot.x + c * v.x - s * v.y, pivot.y + s * v.x + c * v.y};
}

}  // namespace

bool infeasible_triple_region_contains(Point2D l1, Point2D l2, Point2D p, double delta) {
  const double d = distance(l1, l2);
  if (!(d > 2.0 * delta)) {
    throw std::invalid_argument(
        "infeasible_triple_region_contains: locations must be more than 2*delta apart");
  }
  if (l1.x > l2.x) std::swap(l1, l2);

  double theta = std::atan2(l2.y - l1.y, l2.x - l1.x);  // in [-pi/2, pi/2]
  const double alpha = std::asin(2.0 * delta / d);
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (theta + alpha >= half_pi - kPoleGuard || theta - alpha <= -half_pi + kPoleGuard) {
    // Work in a frame where l1 -> l2 is horizontal.
    l2 = rotate_about(l2, l1, -theta);
    p = rotate_about(p, l1, -theta);
    l2.y = l1.y;
    theta = 0.0;
  }

  const double t0 = std::tan(theta);
  const double tp = std::tan(theta + alpha);
  const double tm = std::tan(theta - alpha);
  const double band = 2.0 * delta / std::cos(theta);
  const double tol = kTolerance * (1.0 + std::abs(p.y) + std::abs(p.x));

  // Above the upper envelope: lambda_1, lambda_3 (through l1), lambda_5 (through l2).
  const bool above = p.y > t0 * (p.x - l1.x) + l1.y + band + tol &&
                     p.y > tp * (p.x - l1.x) + l1.y + tol &&
                     p.y > tm * (p.x - l2.x) + l2.y + tol;
  if (above) return true;
  // Below the lower envelope: lambda_2, lambda_4 (through l2), lambda_6 (through l1).
  return p.y < t0 * (p.x - l1.x) + l1.y - band - tol &&
         p.y < tp * (p.x - l2.x) + l2.y - tol &&
         p.y < tm * (p.x - l1.x) + l1.y - tol;
}

std::vector<ConflictTriple> infeasible_triples(std::span<const Point2D> locations, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("infeasible_triples: delta must be positive");
  // Membership is symmetric in the three locations, so each unordered triple
  // is tested once against the region spanned by its first pair that is more
  // than 2*delta apart. A triple without such a pair always fits in a strip.
  std::vector<ConflictTriple> out;
  const std::size_t n = locations.size();
  auto far = [&](std::size_t a, std::size_t b) {
    return distance(locations[a], locations[b]) > 2.0 * delta + kTolerance;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        std::array<std::size_t, 3> t{i, j, k};
        if (far(j, k) && !far(i, j) && !far(i, k)) t = {j, k, i};
        else if (far(i, k) && !far(i, j)) t = {i, k, j};
        else if (!far(i, j)) continue;
        if (infeasible_triple_region_contains(locations[t[0]], locations[t[1]], locations[t[2]], delta)) {
          out.push_back({{i, j, k}});
        }
      }
    }
  }
  return out;
}

}  // namespace tornado::geometry
