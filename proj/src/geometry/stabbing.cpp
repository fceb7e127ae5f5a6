#include "tornado/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace tornado::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Arc endpoints are widened slightly so tangencies count as hits.
constexpr double kArcSlack = 1e-12;

struct ArcEvent {
  double angle;
  int delta;  // +1 opens, -1 closes; opens sort first so intervals are closed
  bool operator<(const ArcEvent& o) const {
    if (angle != o.angle) return angle < o.angle;
    return delta > o.delta;
  }
};

void push_arc(std::vector<ArcEvent>& events, double lo, double hi) {
  lo -= kArcSlack;
  hi += kArcSlack;
  const double len = hi - lo;
  if (len >= kTwoPi) {
    events.push_back({0.0, +1});
    events.push_back({kTwoPi, -1});
    return;
  }
  lo = std::fmod(lo, kTwoPi);
  if (lo < 0.0) lo += kTwoPi;
  hi = lo + len;
  if (hi <= kTwoPi) {
    events.push_back({lo, +1});
    events.push_back({hi, -1});
  } else {
    events.push_back({lo, +1});
    events.push_back({kTwoPi, -1});
    events.push_back({0.0, +1});
    events.push_back({hi - kTwoPi, -1});
  }
}

std::vector<std::size_t> stabbed_by(const Line& line, std::span<const Disk> disks) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < disks.size(); ++i) {
    if (line.distance_to(disks[i].center) <= disks[i].radius + kTolerance) out.push_back(i);
  }
  return out;
}

// Tangent line to the anchor disk touching it at angle phi.
Line tangent_line(const Disk& anchor, double phi) {
  const Point2D n{std::cos(phi), std::sin(phi)};
  return Line{anchor.center + anchor.radius * n, Point2D{-n.y, n.x}};
}

// Same direction, offset moved to the middle of the band that keeps every
// disk in `ids` stabbed.
Line centered(const Line& line, std::span<const Disk> disks, const std::vector<std::size_t>& ids) {
  const Point2D n{-line.direction.y, line.direction.x};
  double lo = -kInfinity;
  double hi = kInfinity;
  for (auto i : ids) {
    const double a = dot(n, disks[i].center);
    lo = std::max(lo, a - disks[i].radius);
    hi = std::min(hi, a + disks[i].radius);
  }
  if (lo > hi) return line;
  const double h = 0.5 * (lo + hi);
  return Line{h * n, line.direction};
}

}  // namespace

StabbingResult stabbing_line(std::span<const Disk> disks) {
  if (disks.empty()) throw std::invalid_argument("stabbing_line: no disks");
  const double r = disks.front().radius;
  if (!(r > 0.0)) throw std::invalid_argument("stabbing_line: radius must be positive");
  for (const auto& d : disks) {
    if (std::abs(d.radius - r) > kTolerance * std::max(1.0, r)) {
      throw std::invalid_argument("stabbing_line: all radii must be equal");
    }
  }

  // Duplicate centers are stabbed together; keep one representative.
  std::vector<Disk> uniq;
  for (const auto& d : disks) {
    const bool seen = std::any_of(uniq.begin(), uniq.end(), [&](const Disk& u) {
      return distance(u.center, d.center) <= 1e-12;
    });
    if (!seen) uniq.push_back(d);
  }

  if (uniq.size() == 1) {
    StabbingResult res;
    res.line = Line{uniq.front().center, {1.0, 0.0}};
    res.stabbed = stabbed_by(res.line, disks);
    res.count = res.stabbed.size();
    return res;
  }

  std::size_t best_depth = 0;
  Line best_line;
  std::vector<ArcEvent> events;
  for (std::size_t a = 0; a < uniq.size(); ++a) {
    events.clear();
    for (std::size_t b = 0; b < uniq.size(); ++b) {
      if (b == a) continue;
      const Point2D v = uniq[b].center - uniq[a].center;
      const double d = norm(v);
      const double psi = std::atan2(v.y, v.x);
      constexpr double half_pi = std::numbers::pi / 2.0;
      if (d <= 2.0 * r) {
        // Intersecting circles: only the external tangents bound the arc.
        push_arc(events, psi - half_pi, psi + half_pi);
      } else {
        const double gamma = std::acos(2.0 * r / d);
        push_arc(events, psi - half_pi, psi - gamma);
        push_arc(events, psi + gamma, psi + half_pi);
      }
    }
    std::sort(events.begin(), events.end());
    std::size_t depth = 0;
    std::size_t local_best = 0;
    double local_angle = 0.0;
    for (const auto& e : events) {
      if (e.delta > 0) {
        ++depth;
        if (depth > local_best) {
          local_best = depth;
          local_angle = e.angle;
        }
      } else {
        --depth;
      }
    }
    if (local_best + 1 > best_depth) {
      best_depth = local_best + 1;
      best_line = tangent_line(uniq[a], local_angle);
    }
  }

  StabbingResult res;
  auto tangent_ids = stabbed_by(best_line, disks);
  Line mid = centered(best_line, disks, tangent_ids);
  auto mid_ids = stabbed_by(mid, disks);
  if (mid_ids.size() >= tangent_ids.size()) {
    res.line = mid;
    res.stabbed = std::move(mid_ids);
  } else {
    res.line = best_line;
    res.stabbed = std::move(tangent_ids);
  }
  res.count = res.stabbed.size();
  return res;
}

SegmentPath shortest_covering_segment_on_line(const Line& line, std::span<const Point2D> centers,
                                              double delta) {
  if (centers.empty()) throw std::invalid_argument("shortest_covering_segment_on_line: no centers");
  // Each center admits the chord of the line inside its delta-disk, of
  // half-length sqrt(delta^2 - dist^2) around its projection. The shortest
  // covering segment spans from the smallest chord end to the largest chord
  // start, or collapses to a point when all chords overlap.
  double max_start = -kInfinity;
  double min_end = kInfinity;
  for (const auto& c : centers) {
    const double off = line.distance_to(c);
    if (off > delta + kTolerance) {
      throw std::invalid_argument("shortest_covering_segment_on_line: center not within delta of line");
    }
    const double half = std::sqrt(std::max(0.0, delta * delta - off * off));
    const double s = line.coordinate_of(c);
    max_start = std::max(max_start, s - half);
    min_end = std::min(min_end, s + half);
  }
  if (max_start <= min_end) {
    const Point2D p = line.at(0.5 * (max_start + min_end));
    return {p, p};
  }
  return {line.at(min_end), line.at(max_start)};
}

}  // namespace tornado::geometry
