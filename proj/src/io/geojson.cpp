#include "tornado/geojson.hpp"

#include <cmath>
#include <numbers>

#include "tornado/instance_io.hpp"

namespace tornado::io {

namespace {

using geometry::Point2D;
using nlohmann::json;

json coord(const model::Instance& inst, Point2D p) {
  if (inst.crs.geographic) p = model::unproject(p, inst.crs.lat0, inst.crs.lon0);
  return json::array({p.x, p.y});
}

json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

json line(const model::Instance& inst, Point2D a, Point2D b) {
  return {{"type", "LineString"}, {"coordinates", json::array({coord(inst, a), coord(inst, b)})}};
}

json collection(json features) { return {{"type", "FeatureCollection"}, {"features", std::move(features)}}; }

}  // namespace

json plan_geojson(const model::Instance& inst, const model::RetrofitPlan& plan, const model::TornadoScenario* worst) {
  json features = json::array();
  for (std::size_t l = 0; l < inst.size(); ++l) {
    const auto& loc = inst.locations[l];
    json props{{"id", loc.id}, {"strategy", plan[l]}, {"population", loc.population}};
    if (worst) props["hit"] = worst->hit(l);
    features.push_back(feature({{"type", "Point"}, {"coordinates", coord(inst, loc.point)}}, std::move(props)));
  }
  if (worst && worst->witness()) {
    const auto& w = *worst->witness();
    features.push_back(feature(line(inst, w.e0, w.e1), {{"kind", "worst_case_path"}, {"hit", worst->active().size()}}));
  }
  return collection(std::move(features));
}

json geometry_geojson(const model::Instance& inst) {
  json features = json::array();
  const auto& r = inst.region;
  json ring = json::array();
  for (auto p : r.corners()) ring.push_back(coord(inst, p));
  ring.push_back(ring.front());
  features.push_back(feature({{"type", "Polygon"}, {"coordinates", json::array({ring})}}, {{"kind", "region"}}));

  const auto pts = inst.points();
  for (std::size_t l = 0; l < pts.size(); ++l) {
    json disk = json::array();
    for (int k = 0; k <= 48; ++k) {
      const double a = 2.0 * std::numbers::pi * (k % 48) / 48.0;
      disk.push_back(coord(inst, pts[l] + Point2D{inst.delta * std::cos(a), inst.delta * std::sin(a)}));
    }
    features.push_back(feature({{"type", "Polygon"}, {"coordinates", json::array({disk})}},
                               {{"kind", "delta_disk"}, {"id", inst.locations[l].id}}));
  }
  for (const auto& p : geometry::infeasible_pairs(pts, inst.delta, inst.max_length)) {
    features.push_back(feature(line(inst, pts[p.idx[0]], pts[p.idx[1]]),
                               {{"kind", "infeasible_pair"},
                                {"a", inst.locations[p.idx[0]].id},
                                {"b", inst.locations[p.idx[1]].id}}));
  }
  if (!pts.empty()) {
    std::vector<geometry::Disk> disks;
    for (auto p : pts) disks.push_back({p, inst.delta});
    const auto s = geometry::stabbing_line(disks);
    const double reach = 2.0 * std::hypot(r.width(), r.height());
    const auto& ln = s.line;
    const double t0 = ln.coordinate_of(Point2D{0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max)}) - reach;
    features.push_back(feature(line(inst, ln.at(t0), ln.at(t0 + 2.0 * reach)),
                               {{"kind", "stabbing_line"}, {"stabbed", s.count}}));
  }
  return collection(std::move(features));
}

}  // namespace tornado::io
