#include "tornado/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tornado::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

// A segment lies on the line {h*n + t*d}; fixing the direction phi turns the
// bounded-length cover test into a convex problem in the offset h.
struct Probe {
  double violation = kInfinity;
  double h = 0.0;
};

class DirectionSearch {
 public:
  DirectionSearch(std::span<const Point2D> centers, double delta, double max_length, const Rect& region)
      : centers_(centers), delta_(delta), length_(max_length), region_(region) {}

  Probe best_offset(double phi) const {
    const Point2D n{-std::sin(phi), std::cos(phi)};
    double lo = -kInfinity;
    double hi = kInfinity;
    for (const auto& c : centers_) {
      const double a = dot(n, c);
      lo = std::max(lo, a - delta_);
      hi = std::min(hi, a + delta_);
    }
    if (lo > hi) return {0.5 * (lo - hi) + 1.0, 0.5 * (lo + hi)};

    constexpr double kGolden = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = violation(phi, x1);
    double f2 = violation(phi, x2);
    for (int it = 0; it < 120 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = violation(phi, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = violation(phi, x2);
      }
    }
    Probe best{f1 <= f2 ? f1 : f2, f1 <= f2 ? x1 : x2};
    for (double h : {lo, hi}) {
      const double v = violation(phi, h);
      if (v < best.violation) best = {v, h};
    }
    return best;
  }

  // Max over the conditions that a covering segment of length <= E with
  // endpoints in R exists on this line. Convex in h for fixed phi.
  double violation(double phi, double h) const {
    Chord ch = chord(phi, h);
    double v = ch.tmin - ch.tmax;
    v = std::max(v, ch.tmin - ch.min_right);
    v = std::max(v, ch.max_left - ch.tmax);
    if (!std::isinf(length_)) v = std::max(v, ch.max_left - ch.min_right - length_);
    return std::max(v, ch.reach_violation);
  }

  SegmentPath witness(double phi, double h) const {
    const Chord ch = chord(phi, h);
    const Point2D d{std::cos(phi), std::sin(phi)};
    const Point2D n{-d.y, d.x};
    auto at = [&](double t) { return h * n + t * d; };
    if (ch.max_left <= ch.min_right) {
      const double lo = std::max(ch.max_left, ch.tmin);
      const double hi = std::min(ch.min_right, ch.tmax);
      const double t = lo <= hi ? 0.5 * (lo + hi) : 0.5 * (ch.max_left + ch.min_right);
      return {at(t), at(t)};
    }
    return {at(ch.min_right), at(ch.max_left)};
  }

 private:
  struct Chord {
    double max_left = -kInfinity;
    double min_right = kInfinity;
    double tmin = -kInfinity;
    double tmax = kInfinity;
    double reach_violation = -kInfinity;
  };

  Chord chord(double phi, double h) const {
    const Point2D d{std::cos(phi), std::sin(phi)};
    const Point2D n{-d.y, d.x};
    Chord ch;
    for (const auto& c : centers_) {
      const double off = std::abs(dot(n, c) - h);
      const double half = std::sqrt(std::max(0.0, delta_ * delta_ - off * off));
      const double s = dot(d, c);
      ch.max_left = std::max(ch.max_left, s - half);
      ch.min_right = std::min(ch.min_right, s + half);
      ch.reach_violation = std::max(ch.reach_violation, off - delta_);
    }
    slab(h * n.x, d.x, region_.x_min, region_.x_max, ch);
    slab(h * n.y, d.y, region_.y_min, region_.y_max, ch);
    return ch;
  }

  static void slab(double base, double dir, double lo, double hi, Chord& ch) {
    if (std::abs(dir) < 1e-15) {
      ch.reach_violation = std::max(ch.reach_violation, std::max(lo - base, base - hi));
      return;
    }
    double t0 = (lo - base) / dir;
    double t1 = (hi - base) / dir;
    if (t0 > t1) std::swap(t0, t1);
    ch.tmin = std::max(ch.tmin, t0);
    ch.tmax = std::min(ch.tmax, t1);
  }

  std::span<const Point2D> centers_;
  double delta_;
  double length_;
  Rect region_;
};

double normalize_direction(double phi) {
  phi = std::fmod(phi, kPi);
  return phi < 0.0 ? phi + kPi : phi;
}

bool verifies(const SegmentPath& seg, std::span<const Point2D> centers, double delta,
              double max_length, const Rect& region) {
  if (!region.contains(seg.e0) || !region.contains(seg.e1)) return false;
  if (!std::isinf(max_length) && seg.length() > max_length + kTolerance) return false;
  return std::all_of(centers.begin(), centers.end(), [&](const Point2D& c) {
    return point_segment_distance(c, seg).distance <= delta + kTolerance;
  });
}

}  // namespace

CoverResult segment_cover_feasible(std::span<const Point2D> centers, double delta,
                                   double max_length, const Rect& region,
                                   const CoverOptions& options) {
  if (!(delta > 0.0)) throw std::invalid_argument("segment_cover_feasible: delta must be positive");
  if (max_length < 0.0) throw std::invalid_argument("segment_cover_feasible: negative length");

  CoverResult res;
  std::vector<Point2D> uniq;
  for (const auto& c : centers) {
    if (std::none_of(uniq.begin(), uniq.end(), [&](const Point2D& u) { return distance(u, c) <= 1e-12; })) {
      uniq.push_back(c);
    }
  }
  if (uniq.empty()) {
    const Point2D mid{0.5 * (region.x_min + region.x_max), 0.5 * (region.y_min + region.y_max)};
    res.status = CoverStatus::feasible;
    res.witness = SegmentPath{mid, mid};
    return res;
  }
  if (uniq.size() == 1) {
    res.status = CoverStatus::feasible;
    res.witness = SegmentPath{uniq.front(), uniq.front()};
    res.stabbed = centers.size();
    return res;
  }

  std::vector<Disk> disks;
  disks.reserve(uniq.size());
  for (const auto& c : uniq) disks.push_back({c, delta});
  const StabbingResult sla = stabbing_line(disks);
  res.stabbed = sla.count;
  if (sla.count < uniq.size()) {
    res.status = CoverStatus::infeasible;
    return res;
  }

  const SegmentPath on_line = shortest_covering_segment_on_line(sla.line, uniq, delta);
  if (verifies(on_line, uniq, delta, max_length, region)) {
    res.status = CoverStatus::feasible;
    res.witness = on_line;
    return res;
  }

  // Bounded-length search: scan directions, minimize the offset exactly for
  // each, then refine the most promising directions by compass search.
  res.used_nonconvex = true;
  const DirectionSearch search(uniq, delta, max_length, region);

  std::vector<double> seeds;
  seeds.push_back(normalize_direction(std::atan2(sla.line.direction.y, sla.line.direction.x)));
  std::size_t far_a = 0;
  std::size_t far_b = 1;
  double far_d = -1.0;
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    for (std::size_t j = i + 1; j < uniq.size(); ++j) {
      const Point2D v = uniq[j] - uniq[i];
      const double d = norm(v);
      if (d > far_d) {
        far_d = d;
        far_a = i;
        far_b = j;
      }
      const double psi = std::atan2(v.y, v.x);
      seeds.push_back(normalize_direction(psi));
      if (d > 2.0 * delta) {
        const double beta = std::asin(2.0 * delta / d);
        seeds.push_back(normalize_direction(psi + beta));
        seeds.push_back(normalize_direction(psi - beta));
      }
    }
  }
  constexpr int kGrid = 360;
  for (int k = 0; k < kGrid; ++k) seeds.push_back(kPi * k / kGrid);
  // Random endpoint pairs drawn from the boxes around the two farthest centers.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < options.starts; ++k) {
    const Point2D e0 = uniq[far_a] + delta * Point2D{unit(rng), unit(rng)};
    const Point2D e1 = uniq[far_b] + delta * Point2D{unit(rng), unit(rng)};
    const Point2D v = e1 - e0;
    if (norm(v) > 0.0) seeds.push_back(normalize_direction(std::atan2(v.y, v.x)));
  }

  std::vector<std::pair<double, double>> scored;  // (violation, phi)
  scored.reserve(seeds.size());
  double best_v = kInfinity;
  double best_phi = 0.0;
  double best_h = 0.0;
  auto consider = [&](double phi) {
    const Probe p = search.best_offset(phi);
    if (p.violation < best_v) {
      best_v = p.violation;
      best_phi = phi;
      best_h = p.h;
    }
    return p.violation;
  };
  for (double phi : seeds) {
    scored.emplace_back(consider(phi), phi);
    if (best_v <= options.feasible_tolerance) break;
  }

  if (best_v > options.feasible_tolerance) {
    std::sort(scored.begin(), scored.end());
    const std::size_t refine = std::min<std::size_t>(scored.size(), 12);
    for (std::size_t k = 0; k < refine && best_v > options.feasible_tolerance; ++k) {
      double phi = scored[k].second;
      double v = scored[k].first;
      double step = kPi / kGrid;
      while (step > 1e-14 && best_v > options.feasible_tolerance) {
        bool moved = false;
        for (double cand : {phi - step, phi + step}) {
          const double cv = consider(cand);
          if (cv < v) {
            v = cv;
            phi = cand;
            moved = true;
            break;
          }
        }
        if (!moved) step *= 0.5;
      }
    }
  }

  res.best_violation = best_v;
  if (best_v <= options.feasible_tolerance) {
    const SegmentPath seg = search.witness(best_phi, best_h);
    if (verifies(seg, uniq, delta, max_length, region)) {
      res.status = CoverStatus::feasible;
      res.witness = seg;
      return res;
    }
    res.status = CoverStatus::inconclusive;
    return res;
  }
  if (std::isinf(max_length)) {
    // Every center is stabbed, so some line covers all; the region only
    // limits where the endpoints may sit and an unbounded segment is free to
    // extend. Report the on-line segment as the witness.
    res.status = CoverStatus::feasible;
    res.witness = on_line;
    return res;
  }
  res.status = best_v <= options.inconclusive_tolerance ? CoverStatus::inconclusive
                                                        : CoverStatus::infeasible;
  return res;
}

}  // namespace tornado::geometry
