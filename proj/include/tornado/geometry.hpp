#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

/// Planar geometry kernel for tornado coverage.
///
/// A tornado path is a line segment; a location is hit when its point lies
/// within distance delta of the segment. All lengths are in miles.
namespace tornado::geometry {

/// Absolute tolerance for geometric comparisons (miles).
inline constexpr double kTolerance = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(double s, Point2D a) { return {s * a.x, s * a.y}; }
inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
double norm(Point2D a);
double distance(Point2D a, Point2D b);

struct SegmentPath {
  Point2D e0;
  Point2D e1;

  double length() const { return distance(e0, e1); }
  Point2D at(double t) const { return e0 + t * (e1 - e0); }
};

struct Disk {
  Point2D center;
  double radius = 0.0;
};

/// Infinite line through `origin` with unit `direction`.
struct Line {
  Point2D origin;
  Point2D direction{1.0, 0.0};

  double distance_to(Point2D p) const { return std::abs(cross(direction, p - origin)); }
  /// Signed coordinate of the orthogonal projection of p along the line.
  double coordinate_of(Point2D p) const { return dot(direction, p - origin); }
  Point2D at(double s) const { return origin + s * direction; }
};

/// Axis-aligned rectangle R = [x_min, x_max] x [y_min, y_max].
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(Point2D p, double tol = kTolerance) const {
    return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol && p.y <= y_max + tol;
  }
  std::array<Point2D, 4> corners() const {
    return {Point2D{x_min, y_min}, Point2D{x_max, y_min}, Point2D{x_max, y_max}, Point2D{x_min, y_max}};
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  /// Bounding box of `points` grown by `margin` on every side.
  static Rect bounding(std::span<const Point2D> points, double margin);

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Pair of location indices that no admissible path can cover together.
struct ConflictPair {
  std::array<std::size_t, 2> idx{};
  friend auto operator<=>(const ConflictPair&, const ConflictPair&) = default;
};

/// Triple of location indices that no line can cover together.
struct ConflictTriple {
  std::array<std::size_t, 3> idx{};
  friend auto operator<=>(const ConflictTriple&, const ConflictTriple&) = default;
};

struct SegmentProjection {
  double distance = 0.0;
  double t = 0.0;  ///< minimizing parameter in [0, 1]
};

SegmentProjection point_segment_distance(Point2D p, const SegmentPath& seg);

/// Pairs farther apart than 2*delta + max_length (strict). Empty for an
/// unbounded length.
std::vector<ConflictPair> infeasible_pairs(std::span<const Point2D> locations, double delta,
                                           double max_length);

/// True iff `p` lies strictly outside the region of points coverable by a
/// line that also covers l1 and l2. Requires distance(l1, l2) > 2*delta.
bool infeasible_triple_region_contains(Point2D l1, Point2D l2, Point2D p, double delta);

/// Every unordered triple that no line covers, detected from the pairwise
/// regions. Indices inside each triple are ascending; output is sorted.
std::vector<ConflictTriple> infeasible_triples(std::span<const Point2D> locations, double delta);

struct StabbingResult {
  Line line;
  std::size_t count = 0;
  std::vector<std::size_t> stabbed;  ///< ascending disk indices within reach of `line`
};

/// Line intersecting the maximum number of equal-radius disks.
///
/// For every anchor disk the tangent lines are parametrised by the angle of
/// the touching point; every other disk contributes one closed arc-interval
/// of angles (overlapping disks) or two (disjoint disks, split by the
/// internal tangents). The deepest point of the arc arrangement over all
/// anchors gives an optimal line. O(m^2 log m).
StabbingResult stabbing_line(std::span<const Disk> disks);

/// Minimal-length segment on `line` that passes within `delta` of every
/// center. Throws std::invalid_argument if some center is farther than delta
/// from the line.
SegmentPath shortest_covering_segment_on_line(const Line& line, std::span<const Point2D> centers,
                                              double delta);

enum class CoverStatus { feasible, infeasible, inconclusive };

const char* to_string(CoverStatus status);

struct CoverOptions {
  int starts = 64;                  ///< multistart count for the bounded-length search
  std::uint64_t seed = 0x5eed'7a11ULL;
  double feasible_tolerance = 1e-9;
  double inconclusive_tolerance = 1e-4;
};

struct CoverResult {
  CoverStatus status = CoverStatus::infeasible;
  std::optional<SegmentPath> witness;
  std::size_t stabbed = 0;          ///< best stabbing-line count
  bool used_nonconvex = false;      ///< the bounded-length endpoint search ran
  double best_violation = 0.0;      ///< search objective at the best start (<= 0 is feasible)

  bool feasible() const { return status == CoverStatus::feasible; }
};

/// Decides whether one segment of length <= max_length with endpoints in R
/// passes within delta of every center.
///
/// Runs the stabbing line first; if some center cannot be reached by any line
/// the set is infeasible. Otherwise the shortest covering segment on the
/// stabbing line is tried, and when it is too long the endpoint search over
/// the bounded-length set is run. With an unbounded length the stabbing-line
/// verdict is final.
CoverResult segment_cover_feasible(std::span<const Point2D> centers, double delta,
                                   double max_length, const Rect& region,
                                   const CoverOptions& options = {});

}  // namespace tornado::geometry
