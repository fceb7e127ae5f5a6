#include <atomic>
#include <chrono>
#include <cstdlib>

#include "tornado/milp.hpp"

namespace tornado::milp {

namespace {

std::string substitute(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::filesystem::path fresh_directory() {
  static std::atomic<unsigned> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto dir = std::filesystem::temp_directory_path() /
             ("tornado-bridge-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

MilpResult solve_external(const Model& model, const std::string& command_template,
                          const std::filesystem::path& workdir) {
  if (command_template.find("{in}") == std::string::npos || command_template.find("{out}") == std::string::npos) {
    throw BridgeError("solver command must contain {in} and {out}: " + command_template);
  }
  const auto dir = workdir.empty() ? fresh_directory() : workdir;
  std::filesystem::create_directories(dir);
  const auto in = dir / "model.lp";
  const auto out = dir / "model.sol";
  std::filesystem::remove(out);
  export_lp(model, in);

  const std::string cmd = substitute(substitute(command_template, "{in}", quoted(in)), "{out}", quoted(out));
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw BridgeError("solver command failed with status " + std::to_string(rc) + ": " + cmd);
  if (!std::filesystem::exists(out)) throw BridgeError("solver wrote no solution file: " + out.string());

  Solution sol;
  try {
    sol = import_solution(out);
  } catch (const LpFormatError& e) {
    throw BridgeError(out.string() + ": " + e.what());
  }
  MilpResult res;
  if (!sol.status.empty() && sol.status != "optimal") {
    if (sol.status == "infeasible") res.status = Status::infeasible;
    else if (sol.status == "unbounded") res.status = Status::unbounded;
    else throw BridgeError("solver reported status " + sol.status);
    return res;
  }
  res.x = sol.to_vector(model);
  res.objective = sol.objective ? *sol.objective : model.evaluate(res.x);
  if (model.max_violation(res.x) > 1e-6) throw BridgeError("solver returned an infeasible point");
  res.status = Status::optimal;
  if (workdir.empty()) std::filesystem::remove_all(dir);
  return res;
}

}  // namespace tornado::milp
