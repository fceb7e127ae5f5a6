#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tornado/geometry.hpp"
#include "tornado/model.hpp"
#include "tornado/second_stage.hpp"

/// Worst-case tornado for a fixed retrofit plan, solved by branch-and-cut
/// with lazily separated conflict and recourse cuts.
namespace tornado::dbc {

using model::Instance;
using model::RetrofitPlan;
using model::TornadoScenario;

/// DEC: conflict cuts only, with lazy separation. AVC: initial conflict cuts
/// plus per-node geometric feasibility. ORG: per-node geometric feasibility
/// alone.
enum class Mode { org, avc, dec };

const char* to_string(Mode m);
/// Accepts "ORG", "AVC" or "DEC" in any case; throws std::invalid_argument.
Mode parse_mode(const std::string& text);

using LocationSet = std::vector<std::size_t>;  ///< ascending indices

struct CutCounts {
  std::size_t pair = 0;
  std::size_t triple = 0;
  std::size_t lazy_conflict = 0;
  std::size_t lazy_recourse = 0;

  friend bool operator==(const CutCounts&, const CutCounts&) = default;
};

/// Geometry verdicts keyed by active set. Coverability does not depend on
/// the retrofit plan, so one cache may serve many subproblem solves.
class FeasibilityCache {
 public:
  explicit FeasibilityCache(geometry::CoverOptions options = {}) : options_(options) {}

  /// Checks (or recalls) whether one tornado path covers `active`.
  const geometry::CoverResult& check(const Instance& inst, const LocationSet& active);

  /// Conflict sets found lazily so far.
  const std::set<LocationSet>& learned() const { return learned_; }
  void learn(const LocationSet& conflict) { learned_.insert(conflict); }

  std::size_t checks() const { return checks_; }
  std::size_t nonconvex_runs() const { return nonconvex_; }
  std::size_t inconclusive() const { return inconclusive_; }
  /// Time spent in geometry checks that missed the cache, seconds.
  double seconds() const { return seconds_; }

 private:
  geometry::CoverOptions options_;
  std::map<LocationSet, geometry::CoverResult> verdicts_;
  std::set<LocationSet> learned_;
  std::size_t checks_ = 0;
  std::size_t nonconvex_ = 0;
  std::size_t inconclusive_ = 0;
  double seconds_ = 0.0;
};

/// Conflict sets and recourse vectors that define the current relaxation.
struct CutPool {
  std::vector<LocationSet> conflicts;
  std::vector<std::vector<std::size_t>> recourse;  ///< recovery plan per location
  CutCounts counts;

  /// False when the set (or the vector) is already present.
  bool add_conflict(LocationSet c);
  bool add_recourse(std::vector<std::size_t> r);

 private:
  std::set<LocationSet> conflict_index_;
  std::set<std::vector<std::size_t>> recourse_index_;
};

/// Infeasible pairs and triples (none in ORG mode) and the recourse vector
/// that solves the no-hit recovery problem.
CutPool init_cut_pool(const Instance& inst, const RetrofitPlan& f, Mode mode);

enum class VerdictKind { feasible, conflict_cut, recourse_cut };

struct Verdict {
  VerdictKind kind = VerdictKind::feasible;
  LocationSet conflict;                  ///< active set when not coverable
  second_stage::RecoveryAssignment recovery;  ///< minimizer when coverable
  bool inconclusive = false;             ///< geometry could not decide
};

/// Separation for an integral candidate (eta, z).
Verdict separate(const Instance& inst, const RetrofitPlan& f, double eta, const std::vector<std::uint8_t>& z,
                 FeasibilityCache& cache);

enum class NodeBound { lp, combinatorial };

struct SubproblemOptions {
  Mode mode = Mode::dec;
  NodeBound bound = NodeBound::lp;
  std::size_t max_nodes = 2'000'000;
  /// When set, one JSON object per tree event is written here.
  std::ostream* trace = nullptr;
};

struct SubproblemResult {
  TornadoScenario z_star = TornadoScenario::none(0);
  double phi = 0.0;
  second_stage::RecoveryAssignment recovery;
  CutCounts cuts;
  std::size_t node_count = 0;
  std::size_t lp_solves = 0;
  std::size_t bridge_calls = 0;    ///< per-node geometric feasibility checks (ORG/AVC)
  std::size_t nonconvex_runs = 0;  ///< bounded-length searches inside the geometry check
  std::size_t inconclusive = 0;
  double wall_time = 0.0;          ///< seconds
};

/// max over coverable z of min over recovery plans. With a cache, verdicts
/// and lazily found conflict sets carry over from earlier calls.
SubproblemResult solve_phi(const Instance& inst, const RetrofitPlan& f, const SubproblemOptions& options = {},
                           FeasibilityCache* cache = nullptr);

}  // namespace tornado::dbc
