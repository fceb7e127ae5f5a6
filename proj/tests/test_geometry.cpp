#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tornado/geometry.hpp"

using namespace tornado::geometry;

namespace {

std::vector<Disk> disks_of(const std::vector<Point2D>& pts, double r) {
  std::vector<Disk> out;
  for (auto p : pts) out.push_back({p, r});
  return out;
}

bool covers(const SegmentPath& seg, const std::vector<Point2D>& pts, double delta, double length, const Rect& r) {
  for (auto p : pts) {
    if (point_segment_distance(p, seg).distance > delta + 1e-9) return false;
  }
  return seg.length() <= length + 1e-9 && r.contains(seg.e0, 1e-9) && r.contains(seg.e1, 1e-9);
}

}  // namespace

TEST_CASE("point to segment distance") {
  const SegmentPath seg{{0, 0}, {4, 0}};
  auto r = point_segment_distance({5, 1}, seg);
  CHECK(r.distance == doctest::Approx(std::sqrt(2.0)));
  CHECK(r.t == doctest::Approx(1.0));
  r = point_segment_distance({2, 3}, seg);
  CHECK(r.distance == doctest::Approx(3.0));
  CHECK(r.t == doctest::Approx(0.5));
  r = point_segment_distance({-1, 0}, SegmentPath{{1, 1}, {1, 1}});
  CHECK(r.distance == doctest::Approx(std::sqrt(5.0)));
  CHECK(r.t == 0.0);
}

TEST_CASE("infeasible pairs") {
  const std::vector<Point2D> far{{0, 0}, {10, 0}};
  const auto pairs = infeasible_pairs(far, 1.0, 5.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].idx == std::array<std::size_t, 2>{0, 1});
  CHECK(infeasible_pairs(std::vector<Point2D>{{0, 0}, {7, 0}}, 1.0, 5.0).empty());
  CHECK(infeasible_pairs(far, 1.0, kInfinity).empty());
  CHECK_THROWS_AS(infeasible_pairs(far, 0.0, 5.0), std::invalid_argument);
}

TEST_CASE("infeasible triple region") {
  CHECK_FALSE(infeasible_triple_region_contains({0, 0}, {4, 0}, {2, 0}, 0.5));
  CHECK(infeasible_triple_region_contains({0, 0}, {4, 0}, {2, 2}, 0.5));
  CHECK(infeasible_triple_region_contains({0, 0}, {0, 4}, {2, 2}, 0.5));
  // The strip of width 2 along y = 1 just reaches all three.
  CHECK_FALSE(infeasible_triple_region_contains({0, 0}, {4, 0}, {2, 2}, 1.0));
  CHECK_FALSE(infeasible_triple_region_contains({0, 0}, {0, 4}, {1.9, 2}, 1.0));
  CHECK_THROWS_AS(infeasible_triple_region_contains({0, 0}, {1, 0}, {2, 2}, 1.0), std::invalid_argument);
}

TEST_CASE("triple region agrees with the strip-width oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int checked = 0;
  while (checked < 400) {
    const Point2D a{u(rng), u(rng)}, b{u(rng), u(rng)}, p{u(rng), u(rng)};
    if (distance(a, b) <= 2.0) continue;
    const double w = oracle::min_strip_width({a, b, p});
    if (std::abs(w - 2.0) < 1e-7) continue;
    CHECK(infeasible_triple_region_contains(a, b, p, 1.0) == (w > 2.0));
    ++checked;
  }
}

TEST_CASE("infeasible triples") {
  CHECK(infeasible_triples(std::vector<Point2D>{{0, 0}, {1, 0}, {2, 0}}, 1.0).empty());
  const auto t = infeasible_triples(std::vector<Point2D>{{0, 0}, {4, 0}, {2, 2}}, 0.5);
  REQUIRE(t.size() == 1);
  CHECK(t[0].idx == std::array<std::size_t, 3>{0, 1, 2});
}

TEST_CASE("triples are found whichever pair is far apart") {
  // Only the pair (1, 2) is more than 2*delta apart.
  const std::vector<Point2D> pts{{2, 3}, {0, 0}, {4, 0}};
  const auto t = infeasible_triples(pts, 1.0);
  REQUIRE(t.size() == 1);
  CHECK(t[0].idx == std::array<std::size_t, 3>{0, 1, 2});
}

TEST_CASE("stabbing line") {
  SUBCASE("single disk") {
    const auto r = stabbing_line(disks_of({{3, 4}}, 1.0));
    CHECK(r.count == 1);
    CHECK(r.line.distance_to({3, 4}) == doctest::Approx(0.0));
  }
  SUBCASE("collinear disks") {
    const auto r = stabbing_line(disks_of({{0, 0}, {5, 0}, {10, 0}, {5, 5}}, 1.0));
    CHECK(r.count == 3);
    CHECK(r.stabbed == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("counterexample points") {
    CHECK(stabbing_line(disks_of({{0, 0}, {4, 0}, {2, 1.1}}, 1.0)).count == 3);
  }
  SUBCASE("random sets match the sweep oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int k = 0; k < 100; ++k) {
      std::vector<Point2D> pts(1 + rng() % 9);
      for (auto& p : pts) p = {u(rng), u(rng)};
      const double delta = 0.2 + 0.1 * (rng() % 8);
      const auto r = stabbing_line(disks_of(pts, delta));
      CHECK(r.count == oracle::max_stabbed(pts, delta));
      for (auto i : r.stabbed) CHECK(r.line.distance_to(pts[i]) <= delta + 1e-9);
    }
  }
}

TEST_CASE("shortest covering segment on a line") {
  const Line x_axis{{0, 0}, {1, 0}};
  auto seg = shortest_covering_segment_on_line(x_axis, std::vector<Point2D>{{1, 0}, {3, 0}}, 1.0);
  CHECK(seg.length() == doctest::Approx(0.0));
  CHECK(seg.e0.x == doctest::Approx(2.0));
  seg = shortest_covering_segment_on_line(x_axis, std::vector<Point2D>{{0, 0}, {4, 0}}, 1.0);
  CHECK(std::min(seg.e0.x, seg.e1.x) == doctest::Approx(1.0));
  CHECK(std::max(seg.e0.x, seg.e1.x) == doctest::Approx(3.0));
  CHECK_THROWS_AS(shortest_covering_segment_on_line(x_axis, std::vector<Point2D>{{0, 2}}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("segment cover feasibility") {
  const std::vector<Point2D> pts{{0, 0}, {4, 0}, {2, 1.1}};
  const Rect r = Rect::bounding(pts, 1.0);

  SUBCASE("counterexample needs more than length 2") {
    const auto res = segment_cover_feasible(pts, 1.0, 2.0, r);
    CHECK(res.status == CoverStatus::infeasible);
    CHECK(res.used_nonconvex);
    CHECK(res.best_violation > 0.0);
  }
  SUBCASE("unbounded length") {
    const auto res = segment_cover_feasible(pts, 1.0, kInfinity, r);
    REQUIRE(res.feasible());
    CHECK(covers(*res.witness, pts, 1.0, kInfinity, Rect{-1e9, 1e9, -1e9, 1e9}));
  }
  SUBCASE("long enough segment") {
    const auto res = segment_cover_feasible(pts, 1.0, 3.0, r);
    REQUIRE(res.feasible());
    CHECK(covers(*res.witness, pts, 1.0, 3.0, r));
  }
  SUBCASE("trivial sets") {
    CHECK(segment_cover_feasible(std::vector<Point2D>{}, 1.0, 0.0, r).feasible());
    const auto one = segment_cover_feasible(std::vector<Point2D>{{1, 1}}, 1.0, 0.0, r);
    REQUIRE(one.feasible());
    CHECK(one.witness->length() == 0.0);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(segment_cover_feasible(pts, 0.0, 1.0, r), std::invalid_argument);
    CHECK_THROWS_AS(segment_cover_feasible(pts, 1.0, -1.0, r), std::invalid_argument);
  }
}

TEST_CASE("segment cover witnesses and refutations on random sets") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  int feasible = 0;
  int infeasible = 0;
  for (int k = 0; k < 150; ++k) {
    std::vector<Point2D> pts(2 + rng() % 4);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const double delta = 0.5 + 0.1 * (rng() % 6);
    const double length = 0.5 * (rng() % 8);
    const Rect r = Rect::bounding(pts, delta);
    const auto res = segment_cover_feasible(pts, delta, length, r);
    if (res.feasible()) {
      ++feasible;
      CHECK(covers(*res.witness, pts, delta, length, r));
    } else if (res.status == CoverStatus::infeasible) {
      ++infeasible;
      // Random segments never succeed where the verdict is infeasible.
      std::uniform_real_distribution<double> ux(r.x_min, r.x_max), uy(r.y_min, r.y_max), ua(0.0, 6.2832);
      for (int t = 0; t < 2000; ++t) {
        const Point2D a{ux(rng), uy(rng)};
        const double ang = ua(rng);
        const Point2D b{a.x + length * std::cos(ang), a.y + length * std::sin(ang)};
        CHECK_FALSE(covers({a, b}, pts, delta, length, r));
      }
    }
  }
  CHECK(feasible > 10);
  CHECK(infeasible > 10);
}

TEST_CASE("bounding rectangle") {
  const auto r = Rect::bounding(std::vector<Point2D>{{1, 2}, {3, -1}}, 0.5);
  CHECK(r == Rect{0.5, 3.5, -1.5, 2.5});
  CHECK(r.contains({0.5, 2.5}));
  CHECK_FALSE(r.contains({0.4, 0.0}));
}
