#include "tornado/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace tornado::model {

using nlohmann::json;

json length_to_json(double length) {
  if (std::isinf(length)) return "inf";
  return length;
}

double length_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return geometry::kInfinity;
    throw InputError("max_length_miles: expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw InputError("max_length_miles: expected a number or \"inf\"");
  return j.get<double>();
}

json instance_to_json(const Instance& inst) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = inst.name;
  if (inst.crs.geographic) {
    j["crs"] = {{"type", "equirectangular"}, {"lat0", inst.crs.lat0}, {"lon0", inst.crs.lon0}};
  } else {
    j["crs"] = {{"type", "planar"}};
  }
  j["delta_miles"] = inst.delta;
  j["max_length_miles"] = length_to_json(inst.max_length);
  j["budget_cents"] = inst.budget;
  j["rectangle"] = {{"x_min", inst.region.x_min},
                    {"x_max", inst.region.x_max},
                    {"y_min", inst.region.y_min},
                    {"y_max", inst.region.y_max}};
  j["num_strategies"] = inst.num_strategies;
  j["num_plans"] = inst.num_plans;
  json locs = json::array();
  for (std::size_t l = 0; l < inst.size(); ++l) {
    const auto& loc = inst.locations[l];
    json w = json::array();
    json d = json::array();
    json g = json::array();
    json c = json::array();
    for (std::size_t s = 0; s < inst.num_strategies; ++s) {
      w.push_back(inst.w(l, s));
      d.push_back(inst.d(l, s));
      json gs = json::array();
      json cs = json::array();
      for (std::size_t p = 0; p < inst.num_plans; ++p) {
        gs.push_back(inst.g(l, s, p));
        cs.push_back(inst.c(l, s, p));
      }
      g.push_back(std::move(gs));
      c.push_back(std::move(cs));
    }
    locs.push_back({{"id", loc.id},
                    {"x", loc.point.x},
                    {"y", loc.point.y},
                    {"population", loc.population},
                    {"area_m2", loc.area_m2},
                    {"w", std::move(w)},
                    {"d_cents", std::move(d)},
                    {"g", std::move(g)},
                    {"c_cents", std::move(c)}});
  }
  j["locations"] = std::move(locs);
  return j;
}

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  try {
    return field(j, key, where).get<T>();
  } catch (const json::type_error& e) {
    throw InputError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw InputError("instance: expected a JSON object");
  const int version = get<int>(j, "schema_version", "instance");
  if (version != kSchemaVersion) {
    throw InputError("instance: unsupported schema_version " + std::to_string(version));
  }
  Instance inst;
  inst.name = j.value("name", std::string{});
  if (auto it = j.find("crs"); it != j.end()) {
    const auto type = get<std::string>(*it, "type", "crs");
    if (type == "equirectangular") {
      inst.crs = {true, get<double>(*it, "lat0", "crs"), get<double>(*it, "lon0", "crs")};
    } else if (type != "planar") {
      throw InputError("crs.type: expected \"planar\" or \"equirectangular\"");
    }
  }
  inst.delta = get<double>(j, "delta_miles", "instance");
  inst.max_length = length_from_json(field(j, "max_length_miles", "instance"));
  inst.budget = get<Cents>(j, "budget_cents", "instance");
  const auto& rect = field(j, "rectangle", "instance");
  inst.region = {get<double>(rect, "x_min", "rectangle"), get<double>(rect, "x_max", "rectangle"),
                 get<double>(rect, "y_min", "rectangle"), get<double>(rect, "y_max", "rectangle")};
  const auto S = get<std::size_t>(j, "num_strategies", "instance");
  const auto P = get<std::size_t>(j, "num_plans", "instance");
  const auto& locs = field(j, "locations", "instance");
  if (!locs.is_array()) throw InputError("instance.locations: expected an array");
  inst.resize(locs.size(), S, P);

  for (std::size_t l = 0; l < locs.size(); ++l) {
    const std::string where = "locations[" + std::to_string(l) + "]";
    const auto& lj = locs[l];
    auto& loc = inst.locations[l];
    loc.id = get<std::string>(lj, "id", where);
    loc.point = {get<double>(lj, "x", where), get<double>(lj, "y", where)};
    loc.population = get<double>(lj, "population", where);
    loc.area_m2 = get<double>(lj, "area_m2", where);
    const auto w = get<std::vector<double>>(lj, "w", where);
    const auto d = get<std::vector<Cents>>(lj, "d_cents", where);
    const auto g = get<std::vector<std::vector<double>>>(lj, "g", where);
    const auto c = get<std::vector<std::vector<Cents>>>(lj, "c_cents", where);
    if (w.size() != S || d.size() != S || g.size() != S || c.size() != S) {
      throw InputError(where + ": w, d_cents, g and c_cents need " + std::to_string(S) + " strategies");
    }
    for (std::size_t s = 0; s < S; ++s) {
      inst.w(l, s) = w[s];
      inst.d(l, s) = d[s];
      if (g[s].size() != P || c[s].size() != P) {
        throw InputError(where + ": g and c_cents need " + std::to_string(P) + " plans per strategy");
      }
      for (std::size_t p = 0; p < P; ++p) {
        inst.g(l, s, p) = g[s][p];
        inst.c(l, s, p) = c[s][p];
      }
    }
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write instance file " + path.string());
  out << instance_to_json(inst).dump(2) << '\n';
}

Point2D project(double lat, double lon, double lat0, double lon0) {
  constexpr double rad = std::numbers::pi / 180.0;
  return {kEarthRadiusMiles * (lon - lon0) * rad * std::cos(lat0 * rad), kEarthRadiusMiles * (lat - lat0) * rad};
}

Point2D unproject(Point2D p, double lat0, double lon0) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double lat = lat0 + p.y / kEarthRadiusMiles / rad;
  const double lon = lon0 + p.x / (kEarthRadiusMiles * std::cos(lat0 * rad)) / rad;
  return {lon, lat};
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError("CSV column \"" + name + "\" not found");
}

bool CsvTable::has(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open CSV file " + path.string());
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line.front() == '#') continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(t.header.size()) + " cells, got " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw InputError(path.string() + ": empty CSV");
  return t;
}

double parse_number(const std::string& cell, const std::string& where) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw InputError(where + ": not a number: \"" + cell + "\"");
  return v;
}

Instance load_instance_csv(const std::filesystem::path& locations, const std::filesystem::path& strategies,
                           const std::filesystem::path& plans, const CsvParams& params) {
  const CsvTable lt = read_csv(locations);
  const CsvTable st = read_csv(strategies);
  const CsvTable pt = read_csv(plans);

  std::size_t S = 1;
  std::size_t P = 1;
  const auto s_col = st.column("strategy");
  for (std::size_t r = 0; r < st.rows.size(); ++r) {
    S = std::max(S, static_cast<std::size_t>(parse_number(st.rows[r][s_col], "strategies.csv")) + 1);
  }
  const auto ps_col = pt.column("strategy");
  const auto pp_col = pt.column("plan");
  for (const auto& row : pt.rows) {
    S = std::max(S, static_cast<std::size_t>(parse_number(row[ps_col], "plans.csv")) + 1);
    P = std::max(P, static_cast<std::size_t>(parse_number(row[pp_col], "plans.csv")) + 1);
  }

  Instance inst;
  inst.name = params.name;
  inst.delta = params.delta;
  inst.max_length = params.max_length;
  inst.budget = params.budget;
  inst.resize(lt.rows.size(), S, P);

  const bool geographic = lt.has("lat") && lt.has("lon");
  const auto id_col = lt.column("id");
  const auto pop_col = lt.column("population");
  const auto area_col = lt.column("area");
  std::map<std::string, std::size_t> by_id;
  double lat0 = 0.0;
  double lon0 = 0.0;
  if (geographic) {
    for (const auto& row : lt.rows) {
      lat0 += parse_number(row[lt.column("lat")], "locations.csv lat");
      lon0 += parse_number(row[lt.column("lon")], "locations.csv lon");
    }
    if (!lt.rows.empty()) {
      lat0 /= static_cast<double>(lt.rows.size());
      lon0 /= static_cast<double>(lt.rows.size());
    }
    inst.crs = {true, lat0, lon0};
  }
  for (std::size_t l = 0; l < lt.rows.size(); ++l) {
    const auto& row = lt.rows[l];
    auto& loc = inst.locations[l];
    loc.id = row[id_col];
    if (geographic) {
      loc.point = project(parse_number(row[lt.column("lat")], "locations.csv lat"),
                          parse_number(row[lt.column("lon")], "locations.csv lon"), lat0, lon0);
    } else {
      loc.point = {parse_number(row[lt.column("x")], "locations.csv x"),
                   parse_number(row[lt.column("y")], "locations.csv y")};
    }
    loc.population = parse_number(row[pop_col], "locations.csv population");
    loc.area_m2 = parse_number(row[area_col], "locations.csv area");
    if (!by_id.emplace(loc.id, l).second) throw InputError("locations.csv: duplicate id " + loc.id);
  }
  auto lookup = [&](const std::string& id, const char* file) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw InputError(std::string(file) + ": unknown location id " + id);
    return it->second;
  };

  const auto sid = st.column("id");
  const auto sw = st.column("w");
  const auto sd = st.column("d_usd");
  for (const auto& row : st.rows) {
    const auto l = lookup(row[sid], "strategies.csv");
    const auto s = static_cast<std::size_t>(parse_number(row[s_col], "strategies.csv"));
    inst.w(l, s) = parse_number(row[sw], "strategies.csv w");
    inst.d(l, s) = to_cents(parse_number(row[sd], "strategies.csv d_usd"));
  }
  const auto pid = pt.column("id");
  const auto pg = pt.column("g");
  const auto pc = pt.column("c_usd");
  for (const auto& row : pt.rows) {
    const auto l = lookup(row[pid], "plans.csv");
    const auto s = static_cast<std::size_t>(parse_number(row[ps_col], "plans.csv"));
    const auto p = static_cast<std::size_t>(parse_number(row[pp_col], "plans.csv"));
    inst.g(l, s, p) = parse_number(row[pg], "plans.csv g");
    inst.c(l, s, p) = to_cents(parse_number(row[pc], "plans.csv c_usd"));
  }
  const auto pts = inst.points();
  inst.region = params.region ? *params.region : Rect::bounding(pts, params.delta);
  return inst;
}

}  // namespace tornado::model
