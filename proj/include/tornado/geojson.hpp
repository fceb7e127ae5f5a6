#pragma once

#include <optional>

#include <json.hpp>

#include "tornado/model.hpp"

/// GeoJSON exports. Geographic instances are written in lon/lat degrees,
/// planar ones in miles.
namespace tornado::io {

/// Point per location with its strategy, plus the witness segment as a
/// LineString when given.
nlohmann::json plan_geojson(const model::Instance& inst, const model::RetrofitPlan& plan,
                            const model::TornadoScenario* worst = nullptr);

/// Debug view of the geometry: R, the Δ-disks as polygons, infeasible pairs
/// as LineStrings and the stabbing line drawn across R.
nlohmann::json geometry_geojson(const model::Instance& inst);

}  // namespace tornado::io
