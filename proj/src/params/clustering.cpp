#include <limits>
#include <random>
#include <stdexcept>

#include "tornado/params.hpp"

namespace tornado::params {

namespace {

double sq(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::size_t nearest(Point2D p, const std::vector<Point2D>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = sq(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::vector<Point2D> seed_plus_plus(const std::vector<RawBlock>& blocks, std::size_t k, std::mt19937_64& rng) {
  std::vector<Point2D> centers;
  std::uniform_int_distribution<std::size_t> first(0, blocks.size() - 1);
  centers.push_back(blocks[first(rng)].point);
  std::vector<double> dist(blocks.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      dist[i] = sq(blocks[i].point, centers[nearest(blocks[i].point, centers)]);
      total += dist[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      pick = blocks.size() - 1;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (dist[i] > 0.0 && target < dist[i]) {
          pick = i;
          break;
        }
        target -= dist[i];
      }
      while (dist[pick] == 0.0 && pick > 0) --pick;
    } else {
      pick = first(rng);
    }
    centers.push_back(blocks[pick].point);
  }
  return centers;
}

std::vector<Point2D> centroids(const std::vector<RawBlock>& blocks, const std::vector<std::size_t>& assignment,
                               std::size_t k, std::vector<std::size_t>& members) {
  std::vector<Point2D> weighted(k), plain(k);
  std::vector<double> weight(k, 0.0);
  members.assign(k, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto c = assignment[i];
    const double w = blocks[i].population;
    weighted[c] = weighted[c] + w * blocks[i].point;
    plain[c] = plain[c] + blocks[i].point;
    weight[c] += w;
    ++members[c];
  }
  std::vector<Point2D> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    if (members[c] == 0) continue;
    out[c] = weight[c] > 0.0 ? (1.0 / weight[c]) * weighted[c] : (1.0 / static_cast<double>(members[c])) * plain[c];
  }
  return out;
}

}  // namespace

double clustering_sse(const std::vector<RawBlock>& blocks, const std::vector<std::size_t>& assignment,
                      std::size_t k) {
  std::vector<std::size_t> members;
  const auto centers = centroids(blocks, assignment, k, members);
  double sse = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) sse += sq(blocks[i].point, centers[assignment[i]]);
  return sse;
}

ClusterResult cluster_blocks(const std::vector<RawBlock>& blocks, std::size_t k, std::uint64_t seed,
                             std::size_t max_iterations) {
  if (k == 0) throw std::invalid_argument("cluster_blocks: k must be positive");
  if (k > blocks.size()) throw std::invalid_argument("cluster_blocks: k exceeds the number of blocks");
  for (const auto& b : blocks) {
    if (!(b.population >= 0.0)) throw std::invalid_argument("block " + b.id + ": negative population");
    if (!(b.area_m2 > 0.0)) throw std::invalid_argument("block " + b.id + ": area must be positive");
  }

  std::mt19937_64 rng(seed);
  std::vector<Point2D> centers = seed_plus_plus(blocks, k, rng);
  std::vector<std::size_t> assignment(blocks.size(), k);
  std::vector<std::size_t> members;

  ClusterResult res;
  for (res.iterations = 1; res.iterations <= max_iterations; ++res.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto c = nearest(blocks[i].point, centers);
      if (c != assignment[i]) {
        assignment[i] = c;
        changed = true;
      }
    }
    centers = centroids(blocks, assignment, k, members);
    for (std::size_t c = 0; c < k; ++c) {
      if (members[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (members[assignment[i]] < 2) continue;
        const double d = sq(blocks[i].point, centers[assignment[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --members[assignment[far]];
      assignment[far] = c;
      members[c] = 1;
      centers = centroids(blocks, assignment, k, members);
      changed = true;
    }
    if (!changed) break;
  }
  res.iterations = std::min(res.iterations, max_iterations);

  res.assignment = assignment;
  res.sse = clustering_sse(blocks, assignment, k);
  res.locations.resize(k);
  std::vector<std::size_t> first_member(k, blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& loc = res.locations[assignment[i]];
    loc.population += blocks[i].population;
    loc.area_m2 += blocks[i].area_m2;
    if (first_member[assignment[i]] == blocks.size()) first_member[assignment[i]] = i;
  }
  for (std::size_t c = 0; c < k; ++c) {
    res.locations[c].point = centers[c];
    res.locations[c].id = members[c] == 1 ? blocks[first_member[c]].id : "cluster_" + std::to_string(c);
  }
  return res;
}

}  // namespace tornado::params
