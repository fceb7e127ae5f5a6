#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tornado/bench.hpp"
#include "tornado/ccg.hpp"
#include "tornado/dbc.hpp"
#include "tornado/geojson.hpp"
#include "tornado/instance_io.hpp"
#include "tornado/milp.hpp"
#include "tornado/params.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tornado;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kInfeasibleInput = 3;
constexpr int kBridgeFailure = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<double> delta;
  std::string length;
  std::vector<double> budgets;  // USD
};

double parse_length(const std::string& text) {
  if (text == "inf" || text == "infinity") return geometry::kInfinity;
  double v = 0.0;
  std::istringstream in(text);
  if (!(in >> v) || !in.eof() || v < 0.0) throw ConfigError("--length expects a nonnegative number or \"inf\"");
  return v;
}

model::Cents budget_cents(double usd) {
  if (!(usd >= 0.0) || !std::isfinite(usd)) throw ConfigError("--budget must be a nonnegative amount in USD");
  return model::to_cents(usd);
}

model::Instance load(const std::string& path, const Overrides& o, bool single_budget = true) {
  if (path.empty()) throw ConfigError("--instance is required");
  if (!fs::exists(path)) throw ConfigError("instance file not found: " + path);
  auto inst = model::load_instance(path);
  if (o.delta) inst.delta = *o.delta;
  if (!o.length.empty()) inst.max_length = parse_length(o.length);
  if (single_budget && o.budgets.size() > 1) throw ConfigError("--budget may be given once for this command");
  if (single_budget && !o.budgets.empty()) inst.budget = budget_cents(o.budgets.front());
  const auto errors = model::validate(inst);
  if (!errors.empty()) {
    std::string msg = "invalid instance " + path + ":";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InfeasibleInput(msg);
  }
  return inst;
}

fs::path out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << text;
}

model::RetrofitPlan parse_plan(const model::Instance& inst, const std::string& text) {
  if (text.empty()) return model::RetrofitPlan::do_nothing(inst);
  std::vector<std::size_t> s_of;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      s_of.push_back(static_cast<std::size_t>(std::stoul(cell)));
    } catch (const std::exception&) {
      throw ConfigError("--plan expects comma-separated strategy indices");
    }
  }
  try {
    return model::RetrofitPlan(inst, std::move(s_of));
  } catch (const std::invalid_argument& e) {
    throw InfeasibleInput(std::string("--plan: ") + e.what());
  }
}

model::RetrofitPlan plan_from_report(const model::Instance& inst, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open report " + path);
  json j;
  try {
    f >> j;
    std::vector<std::size_t> s_of;
    for (const auto& e : j.at("plan")) s_of.push_back(e.at("strategy").get<std::size_t>());
    return model::RetrofitPlan(inst, std::move(s_of));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void warn_inconclusive(std::size_t n) {
  if (n > 0) std::cerr << "warning: " << n << " geometry checks were inconclusive and treated as not coverable\n";
}

struct SolveArgs {
  std::string instance, out, mode = "DEC", solver_cmd, trace;
  Overrides o;
  bool no_timings = false;
  std::size_t max_iterations = 500;
};

int cmd_solve(const SolveArgs& a) {
  const auto inst = load(a.instance, a.o);
  ccg::CcgOptions opt;
  opt.subproblem.mode = dbc::parse_mode(a.mode);
  opt.solver_cmd = a.solver_cmd;
  opt.max_iterations = a.max_iterations;
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw ConfigError("cannot write " + a.trace);
    opt.subproblem.trace = &trace;
  }
  const auto report = ccg::solve(inst, opt);
  const auto dir = out_dir(a.out);
  write_file(dir / "report.json", ccg::report_to_json(report, inst, !a.no_timings).dump(2) + "\n");
  write_file(dir / "bounds.csv", ccg::bounds_csv(report, !a.no_timings));
  write_file(dir / "plan.geojson", io::plan_geojson(inst, report.f_star, &report.worst_case).dump(2) + "\n");
  warn_inconclusive(report.inconclusive);
  std::cout << "objective " << report.v << " (first stage " << report.first_stage << ", worst case "
            << report.phi << ") after " << report.trace.size() << " iterations"
            << (report.converged ? "" : " [not converged]") << "\n";
  return kOk;
}

struct SubproblemArgs {
  std::string instance, out, mode = "DEC", bound = "lp", plan, trace;
  Overrides o;
};

int cmd_subproblem(const SubproblemArgs& a) {
  const auto inst = load(a.instance, a.o);
  const auto f = parse_plan(inst, a.plan);
  dbc::SubproblemOptions opt;
  opt.mode = dbc::parse_mode(a.mode);
  if (a.bound == "lp") {
    opt.bound = dbc::NodeBound::lp;
  } else if (a.bound == "combinatorial") {
    opt.bound = dbc::NodeBound::combinatorial;
  } else {
    throw ConfigError("--bound expects lp or combinatorial");
  }
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw ConfigError("cannot write " + a.trace);
    opt.trace = &trace;
  }
  const auto res = dbc::solve_phi(inst, f, opt);
  json hit = json::array();
  for (auto l : res.z_star.active()) hit.push_back(inst.locations[l].id);
  json j{{"mode", dbc::to_string(opt.mode)},
         {"phi", res.phi},
         {"hit", hit},
         {"recovery_spend_cents", res.recovery.spend},
         {"recovery", res.recovery.plan_of},
         {"cuts",
          {{"pair", res.cuts.pair},
           {"triple", res.cuts.triple},
           {"lazy_conflict", res.cuts.lazy_conflict},
           {"lazy_recourse", res.cuts.lazy_recourse}}},
         {"nodes", res.node_count},
         {"lp_solves", res.lp_solves},
         {"bridge_calls", res.bridge_calls},
         {"nonconvex_runs", res.nonconvex_runs},
         {"inconclusive", res.inconclusive}};
  if (res.z_star.witness()) {
    const auto& w = *res.z_star.witness();
    j["witness"] = {{"e0", {w.e0.x, w.e0.y}}, {"e1", {w.e1.x, w.e1.y}}};
  }
  write_file(out_dir(a.out) / "subproblem.json", j.dump(2) + "\n");
  warn_inconclusive(res.inconclusive);
  std::cout << "phi " << res.phi << " with " << res.z_star.active().size() << " locations hit, " << res.node_count
            << " nodes\n";
  return kOk;
}

struct SimulateArgs {
  std::string instance, out, plan, report, law = "fixed";
  Overrides o;
  std::uint64_t seed = 1;
  std::size_t replications = 100;
  std::size_t threads = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  const auto inst = load(a.instance, a.o);
  model::RetrofitPlan f = model::RetrofitPlan::do_nothing(inst);
  if (!a.report.empty()) {
    f = plan_from_report(inst, a.report);
  } else if (!a.plan.empty()) {
    f = parse_plan(inst, a.plan);
  } else {
    f = ccg::solve(inst).f_star;
  }
  bench::SimulationOptions opt;
  opt.replications = a.replications;
  opt.seed = a.seed;
  opt.threads = a.threads;
  if (a.law == "fixed") {
    opt.length = bench::LengthLaw::fixed;
  } else if (a.law == "uniform") {
    opt.length = bench::LengthLaw::uniform;
  } else {
    throw ConfigError("--length-law expects fixed or uniform");
  }
  const auto res = bench::simulate_random_tornadoes(f, inst, opt);
  const auto dir = out_dir(a.out);
  write_file(dir / "simulation.csv", bench::summary_csv({{inst.name, res.summary}}));
  write_file(dir / "replications.csv", bench::replications_csv(res));
  std::cout << "average " << res.summary.average << ", maximum " << res.summary.maximum << ", minimum "
            << res.summary.minimum << " over " << res.summary.replications << " tornadoes\n";
  return kOk;
}

struct SweepArgs {
  std::string instance, out, mode = "DEC", solver_cmd;
  Overrides o;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.o.budgets.empty()) throw ConfigError("sweep needs at least one --budget");
  const auto inst = load(a.instance, a.o, false);
  std::vector<model::Cents> budgets;
  for (double b : a.o.budgets) budgets.push_back(budget_cents(b));
  std::sort(budgets.begin(), budgets.end());
  ccg::CcgOptions opt;
  opt.subproblem.mode = dbc::parse_mode(a.mode);
  opt.solver_cmd = a.solver_cmd;
  const auto curve = bench::budget_sweep(inst, budgets, opt);
  write_file(out_dir(a.out) / "sweep.csv", bench::sweep_csv(curve));
  for (const auto& p : curve) std::cout << model::to_dollars(p.budget) << " USD -> " << p.v << "\n";
  return kOk;
}

struct GenArgs {
  std::string blocks, fragility, out, name = "generated", length;
  double delta = 1.0;
  double budget = 0.0;
  std::size_t clusters = 0;
  std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& a) {
  if (a.blocks.empty() || !fs::exists(a.blocks)) throw ConfigError("blocks file not found: " + a.blocks);
  if (a.fragility.empty() || !fs::exists(a.fragility)) throw ConfigError("fragility file not found: " + a.fragility);
  model::Crs crs;
  const auto blocks = params::load_blocks_csv(a.blocks, &crs);
  const auto cfg = params::load_fragility(a.fragility);
  params::PipelineOptions opt;
  opt.name = a.name;
  opt.clusters = a.clusters;
  opt.seed = a.seed;
  opt.delta = a.delta;
  opt.max_length = a.length.empty() ? geometry::kInfinity : parse_length(a.length);
  opt.budget = budget_cents(a.budget);
  if (opt.clusters > blocks.size()) throw ConfigError("--clusters exceeds the number of blocks");
  const auto inst = params::build_instance(blocks, cfg, opt, crs);
  const fs::path out = a.out.empty() ? fs::path("instance.json") : fs::path(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  model::save_instance(inst, out);
  std::cout << "wrote " << out.string() << " with " << inst.size() << " locations\n";
  return kOk;
}

struct GeomArgs {
  std::string points, region, length = "inf", out;
  double delta = 1.0;
};

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::string norm = text;
  for (char& c : norm) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream in(norm);
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw ConfigError(std::string(flag) + ": expected numbers");
  return v;
}

int cmd_geomcheck(const GeomArgs& a) {
  const auto nums = parse_numbers(a.points, "--points");
  if (nums.empty() || nums.size() % 2 != 0) throw ConfigError("--points expects x,y pairs separated by ';'");
  if (!(a.delta > 0.0)) throw ConfigError("--delta must be positive");
  std::vector<geometry::Point2D> pts;
  for (std::size_t i = 0; i < nums.size(); i += 2) pts.push_back({nums[i], nums[i + 1]});
  const double length = parse_length(a.length);
  geometry::Rect region = geometry::Rect::bounding(pts, a.delta);
  if (!a.region.empty()) {
    const auto r = parse_numbers(a.region, "--region");
    if (r.size() != 4 || r[0] > r[1] || r[2] > r[3]) throw ConfigError("--region expects x_min,x_max,y_min,y_max");
    region = {r[0], r[1], r[2], r[3]};
  }

  std::vector<geometry::Disk> disks;
  for (auto p : pts) disks.push_back({p, a.delta});
  const auto sla = geometry::stabbing_line(disks);
  const auto pairs = geometry::infeasible_pairs(pts, a.delta, length);
  const auto triples = geometry::infeasible_triples(pts, a.delta);
  const auto cover = geometry::segment_cover_feasible(pts, a.delta, length, region);

  json j{{"verdict", geometry::to_string(cover.status)},
         {"points", pts.size()},
         {"infeasible_pairs", pairs.size()},
         {"infeasible_triples", triples.size()},
         {"stabbing_line_count", sla.count},
         {"bounded_length_search", cover.used_nonconvex},
         {"best_violation", cover.best_violation}};
  j["length"] = model::length_to_json(length);
  if (cover.feasible()) {
    const auto& w = *cover.witness;
    j["witness"] = {{"e0", {w.e0.x, w.e0.y}}, {"e1", {w.e1.x, w.e1.y}}, {"length", w.length()}};
  }
  const std::string text = j.dump(2) + "\n";
  if (!a.out.empty()) write_file(a.out, text);
  std::cout << text;
  return kOk;
}

int cmd_milp_solve(const std::string& in, const std::string& out) {
  milp::Model m;
  try {
    m = milp::import_lp(in);
  } catch (const milp::LpFormatError& e) {
    throw ConfigError(in + ": " + e.what());
  }
  const auto res = milp::solve_embedded(m);
  if (res.status == milp::Status::optimal) {
    write_file(out, milp::write_solution(m, res.x, res.objective));
  } else {
    write_file(out, milp::write_status_only(res.status));
  }
  return kOk;
}

void add_common(CLI::App* sub, std::string& instance, Overrides& o) {
  sub->add_option("--instance", instance, "Instance JSON");
  sub->add_option("--delta", o.delta, "Tornado half-width in miles (overrides the instance)");
  sub->add_option("--length", o.length, "Maximum path length in miles, or \"inf\"");
  sub->add_option("--budget", o.budgets, "Budget in USD (repeatable for sweep)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust tornado retrofit and recovery planning"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve the two-stage robust problem");
  add_common(s, solve.instance, solve.o);
  s->add_option("--mode", solve.mode, "Subproblem mode: ORG, AVC or DEC");
  s->add_option("--out", solve.out, "Output directory");
  s->add_option("--solver-cmd", solve.solver_cmd, "External MILP command template with {in} and {out}")
      ->envname("SOLVER_CMD");
  s->add_option("--trace", solve.trace, "Write subproblem tree events as JSON lines");
  s->add_option("--max-iterations", solve.max_iterations, "Iteration cap");
  s->add_flag("--no-timings", solve.no_timings, "Omit timings so that outputs are reproducible byte for byte");

  SubproblemArgs sub;
  auto* sp = app.add_subcommand("subproblem", "Worst-case tornado for a fixed plan");
  add_common(sp, sub.instance, sub.o);
  sp->add_option("--plan", sub.plan, "Comma-separated strategy per location (default do-nothing)");
  sp->add_option("--mode", sub.mode, "ORG, AVC or DEC");
  sp->add_option("--bound", sub.bound, "Node bound: lp or combinatorial");
  sp->add_option("--trace", sub.trace, "Write tree events as JSON lines");
  sp->add_option("--out", sub.out, "Output directory");

  SimulateArgs sim;
  auto* si = app.add_subcommand("simulate", "Random tornadoes against a fixed plan");
  add_common(si, sim.instance, sim.o);
  si->add_option("--plan", sim.plan, "Comma-separated strategy per location");
  si->add_option("--report", sim.report, "Take the plan from a solve report");
  si->add_option("--replications", sim.replications, "Number of tornadoes")->check(CLI::PositiveNumber);
  si->add_option("--seed", sim.seed, "Random seed");
  si->add_option("--length-law", sim.law, "fixed (length E) or uniform on [0, E]");
  si->add_option("--threads", sim.threads, "Worker threads (0 = hardware concurrency)");
  si->add_option("--out", sim.out, "Output directory");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Optimal value across budgets");
  add_common(sw, sweep.instance, sweep.o);
  sw->add_option("--mode", sweep.mode, "ORG, AVC or DEC");
  sw->add_option("--solver-cmd", sweep.solver_cmd, "External MILP command template")->envname("SOLVER_CMD");
  sw->add_option("--out", sweep.out, "Output directory");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Build an instance from blocks and fragility data");
  g->add_option("--blocks", gen.blocks, "Blocks CSV")->required();
  g->add_option("--fragility", gen.fragility, "Fragility config JSON")->required();
  g->add_option("--clusters", gen.clusters, "Number of k-means clusters (0 keeps every block)");
  g->add_option("--seed", gen.seed, "Clustering seed");
  g->add_option("--delta", gen.delta, "Tornado half-width in miles");
  g->add_option("--length", gen.length, "Maximum path length in miles, or \"inf\"");
  g->add_option("--budget", gen.budget, "Budget in USD");
  g->add_option("--name", gen.name, "Instance name");
  g->add_option("--out", gen.out, "Output instance JSON");

  GeomArgs geom;
  auto* gc = app.add_subcommand("geomcheck", "Can one tornado path cover these points?");
  gc->add_option("--points", geom.points, "Points as \"x,y;x,y;...\"")->required();
  gc->add_option("--delta", geom.delta, "Tornado half-width");
  gc->add_option("--length", geom.length, "Maximum path length, or \"inf\"");
  gc->add_option("--region", geom.region, "x_min,x_max,y_min,y_max (default: bounding box grown by delta)");
  gc->add_option("--out", geom.out, "Also write the verdict JSON here");

  std::string lp_in, lp_out;
  auto* ms = app.add_subcommand("milp-solve", "Solve an LP-format model with the embedded solver");
  ms->add_option("input", lp_in, "LP file")->required();
  ms->add_option("output", lp_out, "Solution file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*sp) return cmd_subproblem(sub);
    if (*si) return cmd_simulate(sim);
    if (*sw) return cmd_sweep(sweep);
    if (*g) return cmd_gen(gen);
    if (*gc) return cmd_geomcheck(geom);
    if (*ms) return cmd_milp_solve(lp_in, lp_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const model::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InfeasibleInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasibleInput;
  } catch (const milp::BridgeError& e) {
    std::cerr << "solver bridge failed: " << e.what() << "\n";
    return kBridgeFailure;
  } catch (const milp::NeedsExternalSolver& e) {
    std::cerr << "solver bridge failed: " << e.what() << "\n";
    return kBridgeFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasibleInput;
  }
  return kConfigError;
}
