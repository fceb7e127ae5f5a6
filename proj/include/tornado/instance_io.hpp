#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "tornado/model.hpp"

namespace tornado::model {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kEarthRadiusMiles = 3958.8;

/// Thrown for malformed instance, CSV or config input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

/// Encodes E as a number, or the string "inf" when unbounded.
nlohmann::json length_to_json(double length);
double length_from_json(const nlohmann::json& j);

/// Local equirectangular projection of (lat, lon) degrees to planar miles
/// about the anchor (lat0, lon0).
Point2D project(double lat, double lon, double lat0, double lon0);
/// Inverse of project(); returns (lon, lat) degrees as a point.
Point2D unproject(Point2D p, double lat0, double lon0);

struct CsvParams {
  std::string name = "csv";
  double delta = 1.0;
  double max_length = geometry::kInfinity;
  Cents budget = 0;
  std::optional<Rect> region;  ///< defaults to the bounding box grown by delta
};

/// Builds an instance from three CSV files:
///   locations.csv  id,x,y,population,area   (or id,lat,lon,population,area)
///   strategies.csv id,strategy,w,d_usd
///   plans.csv      id,strategy,plan,g,c_usd
/// Rows missing from strategies.csv or plans.csv stay zero.
Instance load_instance_csv(const std::filesystem::path& locations, const std::filesystem::path& strategies,
                           const std::filesystem::path& plans, const CsvParams& params);

/// Minimal CSV table: header names plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws InputError when missing.
  std::size_t column(const std::string& name) const;
  bool has(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);
double parse_number(const std::string& cell, const std::string& where);

}  // namespace tornado::model
