#include <algorithm>
#include <cctype>
#include <chrono>
#include <stdexcept>

#include "tornado/dbc.hpp"

namespace tornado::dbc {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::org: return "ORG";
    case Mode::avc: return "AVC";
    case Mode::dec: return "DEC";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  std::string up = text;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (up == "ORG") return Mode::org;
  if (up == "AVC") return Mode::avc;
  if (up == "DEC") return Mode::dec;
  throw std::invalid_argument("unknown mode \"" + text + "\" (expected ORG, AVC or DEC)");
}

bool CutPool::add_conflict(LocationSet c) {
  std::sort(c.begin(), c.end());
  if (!conflict_index_.insert(c).second) return false;
  conflicts.push_back(std::move(c));
  return true;
}

bool CutPool::add_recourse(std::vector<std::size_t> r) {
  if (!recourse_index_.insert(r).second) return false;
  recourse.push_back(std::move(r));
  return true;
}

CutPool init_cut_pool(const Instance& inst, const RetrofitPlan& f, Mode mode) {
  CutPool pool;
  if (mode != Mode::org) {
    const auto pts = inst.points();
    for (const auto& p : geometry::infeasible_pairs(pts, inst.delta, inst.max_length)) {
      if (pool.add_conflict({p.idx[0], p.idx[1]})) ++pool.counts.pair;
    }
    for (const auto& t : geometry::infeasible_triples(pts, inst.delta)) {
      if (pool.add_conflict({t.idx[0], t.idx[1], t.idx[2]})) ++pool.counts.triple;
    }
  }
  const std::vector<std::uint8_t> none(inst.size(), 0);
  pool.add_recourse(second_stage::solve_Q(inst, f, none).plan_of);
  return pool;
}

const geometry::CoverResult& FeasibilityCache::check(const Instance& inst, const LocationSet& active) {
  ++checks_;
  auto it = verdicts_.find(active);
  if (it != verdicts_.end()) return it->second;
  std::vector<geometry::Point2D> pts;
  pts.reserve(active.size());
  for (auto l : active) pts.push_back(inst.locations[l].point);
  const auto start = std::chrono::steady_clock::now();
  auto res = geometry::segment_cover_feasible(pts, inst.delta, inst.max_length, inst.region, options_);
  seconds_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.used_nonconvex) ++nonconvex_;
  if (res.status == geometry::CoverStatus::inconclusive) ++inconclusive_;
  return verdicts_.emplace(active, std::move(res)).first->second;
}

}  // namespace tornado::dbc
