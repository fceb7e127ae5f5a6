#include "tornado/geometry.hpp"

#include <algorithm>

namespace tornado::geometry {

double norm(Point2D a) { return std::hypot(a.x, a.y); }

double distance(Point2D a, Point2D b) { return norm(a - b); }

Rect Rect::bounding(std::span<const Point2D> points, double margin) {
  Rect r{kInfinity, -kInfinity, kInfinity, -kInfinity};
  for (const auto& p : points) {
    r.x_min = std::min(r.x_min, p.x);
    r.x_max = std::max(r.x_max, p.x);
    r.y_min = std::min(r.y_min, p.y);
    r.y_max = std::max(r.y_max, p.y);
  }
  if (points.empty()) r = Rect{};
  r.x_min -= margin;
  r.x_max += margin;
  r.y_min -= margin;
  r.y_max += margin;
  return r;
}

SegmentProjection point_segment_distance(Point2D p, const SegmentPath& seg) {
  const Point2D dir = seg.e1 - seg.e0;
  const double len2 = dot(dir, dir);
  if (len2 == 0.0) return {distance(p, seg.e0), 0.0};
  const double t = std::clamp(dot(p - seg.e0, dir) / len2, 0.0, 1.0);
  return {distance(p, seg.at(t)), t};
}

const char* to_string(CoverStatus status) {
  switch (status) {
    case CoverStatus::feasible: return "feasible";
    case CoverStatus::infeasible: return "infeasible";
    case CoverStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace tornado::geometry
