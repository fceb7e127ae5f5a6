#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tornado/bench.hpp"

namespace tornado::bench {

namespace {

// Largest t in [0, 1] with p + t·v inside r, for p inside r.
double exit_parameter(const geometry::Rect& r, geometry::Point2D p, geometry::Point2D v) {
  double t = 1.0;
  auto limit = [&t](double pos, double dir, double lo, double hi) {
    if (dir > 0.0) t = std::min(t, (hi - pos) / dir);
    if (dir < 0.0) t = std::min(t, (lo - pos) / dir);
  };
  limit(p.x, v.x, r.x_min, r.x_max);
  limit(p.y, v.y, r.y_min, r.y_max);
  return std::max(t, 0.0);
}

Replication draw(const RetrofitPlan& f, const Instance& inst, const SimulationOptions& opt, std::size_t index,
                 double first_stage) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const auto& r = inst.region;
  std::uniform_real_distribution<double> ux(r.x_min, r.x_max);
  std::uniform_real_distribution<double> uy(r.y_min, r.y_max);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const geometry::Point2D start{ux(rng), uy(rng)};
  const double theta = angle(rng);
  double length = std::isfinite(inst.max_length) ? inst.max_length : 2.0 * std::hypot(r.width(), r.height());
  if (opt.length == LengthLaw::uniform) length = std::uniform_real_distribution<double>(0.0, length)(rng);

  const geometry::Point2D v{length * std::cos(theta), length * std::sin(theta)};
  const double t = opt.clip ? exit_parameter(r, start, v) : 1.0;
  Replication rep;
  rep.segment = {start, start + t * v};
  const auto z = model::TornadoScenario::from_segment(inst, rep.segment);
  rep.hit = z.active().size();
  rep.dislocation = first_stage + second_stage::solve_Q(inst, f, z.z()).objective;
  return rep;
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

SimulationSummary summarize(const std::vector<double>& values, std::uint64_t seed) {
  SimulationSummary s;
  s.seed = seed;
  s.replications = values.size();
  if (values.empty()) return s;
  s.minimum = *std::min_element(values.begin(), values.end());
  s.maximum = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.average = std::clamp(sum / static_cast<double>(values.size()), s.minimum, s.maximum);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.average) * (v - s.average);
    s.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

SimulationResult simulate_random_tornadoes(const RetrofitPlan& f, const Instance& inst,
                                           const SimulationOptions& options) {
  if (options.replications == 0) throw std::invalid_argument("simulate_random_tornadoes: need at least one replication");
  const double first_stage = f.first_stage_dislocation(inst);
  SimulationResult res;
  res.draws.resize(options.replications);

  std::size_t workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, options.replications);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < options.replications; i += workers) {
        res.draws[i] = draw(f, inst, options, i, first_stage);
      }
    });
  }
  for (auto& t : pool) t.join();

  std::vector<double> values;
  for (const auto& d : res.draws) values.push_back(d.dislocation);
  res.summary = summarize(values, options.seed);
  return res;
}

std::string summary_csv(const std::vector<std::pair<std::string, SimulationSummary>>& rows) {
  std::ostringstream out;
  out << "label,average,maximum,minimum,std_dev,replications,seed\n";
  for (const auto& [label, s] : rows) {
    out << label << ',' << num(s.average) << ',' << num(s.maximum) << ',' << num(s.minimum) << ','
        << num(s.std_dev) << ',' << s.replications << ',' << s.seed << '\n';
  }
  return out.str();
}

std::string replications_csv(const SimulationResult& result) {
  std::ostringstream out;
  out << "replication,x0,y0,x1,y1,hit,dislocation\n";
  for (std::size_t i = 0; i < result.draws.size(); ++i) {
    const auto& d = result.draws[i];
    out << i << ',' << num(d.segment.e0.x) << ',' << num(d.segment.e0.y) << ',' << num(d.segment.e1.x) << ','
        << num(d.segment.e1.y) << ',' << d.hit << ',' << num(d.dislocation) << '\n';
  }
  return out.str();
}

}  // namespace tornado::bench
