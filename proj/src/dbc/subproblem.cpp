#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "tornado/dbc.hpp"
#include "tornado/milp.hpp"

namespace tornado::dbc {

namespace {

struct Node {
  double bound;
  std::size_t depth;
  std::size_t id;
  std::vector<std::int8_t> fix;  // -1 free, 0 or 1 fixed
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

struct Relaxation {
  bool feasible = false;
  double eta = 0.0;
  std::vector<double> z;
};

class Tree {
 public:
  Tree(const Instance& inst, const RetrofitPlan& f, const SubproblemOptions& opt, FeasibilityCache& cache)
      : inst_(inst), f_(f), opt_(opt), cache_(cache), pool_(init_cut_pool(inst, f, opt.mode)) {
    if (opt.mode == Mode::dec) {
      for (const auto& c : cache.learned()) pool_.add_conflict(c);
    }
    for (std::size_t l = 0; l < inst.size(); ++l) {
      double most = 0.0;
      for (std::size_t p = 0; p < inst.num_plans; ++p) most = std::max(most, inst.g(l, f[l], p));
      eta_cap_ += most;
    }
    eta_cap_ += 1.0;
    incumbent_z_.assign(inst.size(), 0);
  }

  SubproblemResult run() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t nonconvex_before = cache_.nonconvex_runs();
    const std::size_t inconclusive_before = cache_.inconclusive();

    open_.push({geometry::kInfinity, 0, next_id_++, std::vector<std::int8_t>(inst_.size(), -1)});
    while (!open_.empty()) {
      Node node = open_.top();
      open_.pop();
      if (prunable(node.bound)) {
        event(node, "prune");
        continue;
      }
      if (++nodes_ > opt_.max_nodes) throw std::runtime_error("subproblem node limit exceeded");
      process(std::move(node));
    }

    SubproblemResult res;
    res.phi = incumbent_;
    res.recovery = second_stage::solve_Q(inst_, f_, incumbent_z_);
    std::optional<geometry::SegmentPath> witness;
    const LocationSet active = TornadoScenario(incumbent_z_, std::nullopt).active();
    if (active.empty()) {
      const geometry::Point2D corner{inst_.region.x_min, inst_.region.y_min};
      witness = geometry::SegmentPath{corner, corner};
    } else {
      witness = cache_.check(inst_, active).witness;
    }
    res.z_star = TornadoScenario(incumbent_z_, witness);
    res.cuts = pool_.counts;
    res.node_count = nodes_;
    res.lp_solves = lp_solves_;
    res.bridge_calls = bridge_calls_;
    res.nonconvex_runs = cache_.nonconvex_runs() - nonconvex_before;
    res.inconclusive = cache_.inconclusive() - inconclusive_before;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
  }

 private:
  bool prunable(double bound) const { return bound <= incumbent_ + 1e-9 * (1.0 + std::abs(incumbent_)); }

  double recourse_value(const std::vector<std::size_t>& r, std::size_t l) const { return inst_.g(l, f_[l], r[l]); }

  Relaxation solve_lp(const Node& node) {
    ++lp_solves_;
    milp::Model m;
    const auto eta = m.add_variable("eta", milp::VarKind::continuous, 0.0, eta_cap_);
    std::vector<std::size_t> z(inst_.size());
    for (std::size_t l = 0; l < inst_.size(); ++l) {
      const double lo = node.fix[l] == 1 ? 1.0 : 0.0;
      const double hi = node.fix[l] == 0 ? 0.0 : 1.0;
      z[l] = m.add_variable("z" + std::to_string(l), milp::VarKind::continuous, lo, hi);
    }
    for (const auto& r : pool_.recourse) {
      std::vector<milp::Term> terms{{eta, 1.0}};
      for (std::size_t l = 0; l < inst_.size(); ++l) {
        const double g = recourse_value(r, l);
        if (g != 0.0) terms.push_back({z[l], -g});
      }
      m.add_constraint("", std::move(terms), milp::RowSense::le, 0.0);
    }
    for (const auto& c : pool_.conflicts) {
      std::vector<milp::Term> terms;
      for (auto l : c) terms.push_back({z[l], 1.0});
      m.add_constraint("", std::move(terms), milp::RowSense::le, static_cast<double>(c.size()) - 1.0);
    }
    m.set_objective(milp::ObjSense::maximize, {{eta, 1.0}});
    const auto lp = milp::solve_lp(m);
    Relaxation out;
    if (lp.status == milp::Status::infeasible) return out;
    if (lp.status != milp::Status::optimal) throw std::runtime_error("node relaxation failed to solve");
    out.feasible = true;
    out.eta = lp.x[eta];
    out.z.assign(lp.x.begin() + 1, lp.x.end());
    return out;
  }

  // Valid bound without an LP: every recourse vector bounds the value of any
  // coverage inside the node's box.
  Relaxation solve_combinatorial(const Node& node) {
    Relaxation out;
    for (const auto& c : pool_.conflicts) {
      bool all_one = true;
      for (auto l : c) all_one = all_one && node.fix[l] == 1;
      if (all_one) return out;
    }
    out.feasible = true;
    out.eta = geometry::kInfinity;
    for (const auto& r : pool_.recourse) {
      double v = 0.0;
      for (std::size_t l = 0; l < inst_.size(); ++l) {
        if (node.fix[l] != 0) v += recourse_value(r, l);
      }
      out.eta = std::min(out.eta, v);
    }
    out.z.assign(inst_.size(), 0.5);
    for (std::size_t l = 0; l < inst_.size(); ++l) {
      if (node.fix[l] >= 0) out.z[l] = node.fix[l];
    }
    return out;
  }

  void branch(const Node& node, std::size_t var, double bound) {
    for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      Node child{bound, node.depth + 1, next_id_++, node.fix};
      child.fix[var] = v;
      open_.push(std::move(child));
    }
  }

  void process(Node node) {
    for (std::size_t round = 0;; ++round) {
      if (round > 100'000) throw std::runtime_error("separation loop did not settle");
      const Relaxation rel = opt_.bound == NodeBound::lp ? solve_lp(node) : solve_combinatorial(node);
      if (!rel.feasible) {
        event(node, "infeasible");
        return;
      }
      node.bound = std::min(node.bound, rel.eta);
      if (prunable(rel.eta)) {
        event(node, "prune");
        return;
      }

      std::size_t frac_var = inst_.size();
      double most = 1e-6;
      for (std::size_t l = 0; l < inst_.size(); ++l) {
        const double frac = std::abs(rel.z[l] - std::round(rel.z[l]));
        if (frac > most + 1e-12) {
          most = frac;
          frac_var = l;
        }
      }
      if (frac_var < inst_.size()) {
        event(node, "branch", static_cast<long long>(frac_var));
        branch(node, frac_var, rel.eta);
        return;
      }

      std::vector<std::uint8_t> z(inst_.size());
      for (std::size_t l = 0; l < inst_.size(); ++l) z[l] = rel.z[l] > 0.5 ? 1 : 0;
      if (opt_.mode != Mode::dec) ++bridge_calls_;
      const Verdict v = separate(inst_, f_, rel.eta, z, cache_);

      if (v.kind == VerdictKind::conflict_cut) {
        if (opt_.mode == Mode::dec) {
          cache_.learn(v.conflict);
          if (pool_.add_conflict(v.conflict)) ++pool_.counts.lazy_conflict;
          event(node, "cut", -1, "C");
          continue;
        }
        // Without global cuts the candidate is excluded by branching on a
        // location of the uncoverable set that is still free.
        for (auto l : v.conflict) {
          if (node.fix[l] < 0) {
            event(node, "branch", static_cast<long long>(l));
            branch(node, l, rel.eta);
            return;
          }
        }
        event(node, "infeasible");
        return;
      }

      const double q = v.recovery.objective;
      if (q > incumbent_) {
        incumbent_ = q;
        incumbent_z_ = z;
        event(node, "incumbent");
      }
      if (v.kind == VerdictKind::recourse_cut && pool_.add_recourse(v.recovery.plan_of)) {
        ++pool_.counts.lazy_recourse;
        event(node, "cut", -1, "R");
        continue;
      }
      event(node, "settled");
      return;
    }
  }

  void event(const Node& node, const char* action, long long var = -1, const char* cut = nullptr) {
    if (!opt_.trace) return;
    nlohmann::json j{{"node", node.id}, {"depth", node.depth}, {"action", action}, {"incumbent", incumbent_}};
    j["bound"] = std::isfinite(node.bound) ? nlohmann::json(node.bound) : nlohmann::json("inf");
    if (var >= 0) j["var"] = var;
    if (cut) j["cut"] = cut;
    *opt_.trace << j.dump() << '\n';
  }

  const Instance& inst_;
  const RetrofitPlan& f_;
  const SubproblemOptions& opt_;
  FeasibilityCache& cache_;
  CutPool pool_;
  double eta_cap_ = 0.0;
  double incumbent_ = 0.0;
  std::vector<std::uint8_t> incumbent_z_;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open_;
  std::size_t next_id_ = 0;
  std::size_t nodes_ = 0;
  std::size_t lp_solves_ = 0;
  std::size_t bridge_calls_ = 0;
};

}  // namespace

SubproblemResult solve_phi(const Instance& inst, const RetrofitPlan& f, const SubproblemOptions& options,
                           FeasibilityCache* cache) {
  FeasibilityCache local;
  Tree tree(inst, f, options, cache ? *cache : local);
  return tree.run();
}

}  // namespace tornado::dbc
