#include "tornado/instance_io.hpp"
#include "tornado/params.hpp"

namespace tornado::params {

std::vector<RawBlock> load_blocks_csv(const std::filesystem::path& path, model::Crs* crs) {
  const auto t = model::read_csv(path);
  const std::string file = path.filename().string();
  const bool geographic = t.has("lat") && t.has("lon");
  const auto id = t.column("id");
  const auto pop = t.column("population");
  const auto area = t.has("area_m2") ? t.column("area_m2") : t.column("area");

  std::vector<RawBlock> blocks;
  double lat0 = 0.0;
  double lon0 = 0.0;
  if (geographic) {
    for (const auto& row : t.rows) {
      lat0 += model::parse_number(row[t.column("lat")], file + " lat");
      lon0 += model::parse_number(row[t.column("lon")], file + " lon");
    }
    if (!t.rows.empty()) {
      lat0 /= static_cast<double>(t.rows.size());
      lon0 /= static_cast<double>(t.rows.size());
    }
  }
  if (crs) *crs = {geographic, lat0, lon0};

  for (const auto& row : t.rows) {
    RawBlock b;
    b.id = row[id];
    if (geographic) {
      b.point = model::project(model::parse_number(row[t.column("lat")], file + " lat"),
                               model::parse_number(row[t.column("lon")], file + " lon"), lat0, lon0);
    } else {
      b.point = {model::parse_number(row[t.column("x")], file + " x"),
                 model::parse_number(row[t.column("y")], file + " y")};
    }
    b.population = model::parse_number(row[pop], file + " population");
    b.area_m2 = model::parse_number(row[area], file + " area");
    if (b.population < 0.0) throw model::InputError(file + ": negative population for block " + b.id);
    if (!(b.area_m2 > 0.0)) throw model::InputError(file + ": area must be positive for block " + b.id);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

model::Instance build_instance(const std::vector<RawBlock>& blocks, const FragilityConfig& cfg,
                               const PipelineOptions& options, const model::Crs& crs) {
  const auto errors = validate(cfg);
  if (!errors.empty()) throw std::invalid_argument("fragility config: " + errors.front());
  if (blocks.empty()) throw std::invalid_argument("build_instance: no blocks");

  std::vector<model::Location> locations;
  if (options.clusters == 0 || options.clusters == blocks.size()) {
    for (const auto& b : blocks) locations.push_back({b.id, b.point, b.population, b.area_m2});
  } else {
    locations = cluster_blocks(blocks, options.clusters, options.seed).locations;
  }

  model::Instance inst;
  inst.name = options.name;
  inst.crs = crs;
  inst.delta = options.delta;
  inst.max_length = options.max_length;
  inst.budget = options.budget;
  const std::size_t S = cfg.strategies.size();
  inst.resize(locations.size(), S, 2);
  inst.locations = locations;

  std::vector<geometry::Point2D> pts;
  for (std::size_t l = 0; l < locations.size(); ++l) {
    const auto& loc = locations[l];
    pts.push_back(loc.point);
    for (std::size_t s = 0; s < S; ++s) {
      const auto& st = cfg.strategies[s];
      const double g1 = dislocation_after_recovery(cfg, s, loc.population);
      inst.w(l, s) = st.w_per_person * loc.population;
      inst.d(l, s) = model::to_cents(st.retrofit_cost_per_m2 * loc.area_m2);
      inst.g(l, s, 1) = g1;
      inst.g(l, s, 0) = do_nothing_dislocation(g1, loc.population, cfg.mu);
      inst.c(l, s, 0) = 0;
      inst.c(l, s, 1) = model::to_cents(recovery_cost(cfg, s, loc.area_m2));
    }
  }
  inst.region = geometry::Rect::bounding(pts, options.delta);
  return inst;
}

}  // namespace tornado::params
