#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/// Neutral MILP representation, an embedded LP/MILP solver and LP-format
/// file exchange with external solvers.
namespace tornado::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary, integer };
enum class RowSense { le, ge, eq };
enum class ObjSense { minimize, maximize };

struct Variable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

class Model {
 public:
  /// Binary variables get bounds [0, 1] regardless of the arguments.
  std::size_t add_variable(std::string name, VarKind kind, double lower = 0.0, double upper = kInf);
  std::size_t add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);
  void set_objective(ObjSense sense, std::vector<Term> terms, double constant = 0.0);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const std::vector<Term>& objective() const { return obj_; }
  ObjSense sense() const { return sense_; }
  double objective_constant() const { return obj_const_; }
  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_integer() const;

  /// Index lookup by name.
  std::optional<std::size_t> find(const std::string& name) const;
  Variable& variable(std::size_t j) { return vars_[j]; }

  /// Objective value of a full assignment, including the constant.
  double evaluate(std::span<const double> x) const;
  /// Largest bound, row or integrality violation of `x`.
  double max_violation(std::span<const double> x) const;

  /// Throws std::invalid_argument on bad indices, non-finite coefficients or
  /// inverted bounds.
  void validate() const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<Term> obj_;
  ObjSense sense_ = ObjSense::minimize;
  double obj_const_ = 0.0;
  std::map<std::string, std::size_t> index_;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit, node_limit };

const char* to_string(Status s);

struct LpOptions {
  std::size_t max_iterations = 100'000;
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
};

struct LpResult {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// LP relaxation of `model` with the given variable bounds (defaults to the
/// model's own bounds), solved by a dense bounded-variable primal simplex.
LpResult solve_lp(const Model& model, std::span<const double> lower = {}, std::span<const double> upper = {},
                  const LpOptions& options = {});

/// Thrown when a model exceeds the embedded solver's size cap.
class NeedsExternalSolver : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MilpOptions {
  std::size_t max_integer_vars = 5000;
  std::size_t max_nodes = 1'000'000;
  double integrality_tolerance = 1e-6;
  /// Nodes whose bound cannot beat the incumbent by more than this are pruned.
  double absolute_gap = 1e-9;
  LpOptions lp;
};

struct MilpResult {
  Status status = Status::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
};

/// Best-bound branch-and-bound, branching on the most fractional variable
/// (ties to the lowest index).
MilpResult solve_embedded(const Model& model, const MilpOptions& options = {});

/// Exhaustive reference solver over integer variables with small domains;
/// continuous variables are resolved by LP. Intended for tests.
MilpResult solve_by_enumeration(const Model& model);

// ---------------------------------------------------------------------------
// LP file format

class LpFormatError : public std::runtime_error {
 public:
  LpFormatError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Empty when `name` is a legal LP-format identifier, else the reason.
std::optional<std::string> check_name(const std::string& name);

/// Writes objective, constraints, bounds, binaries and generals sections.
/// Zero coefficients are omitted. Throws std::invalid_argument on an illegal
/// variable or row name.
std::string write_lp(const Model& model);
void export_lp(const Model& model, const std::filesystem::path& path);

/// Parses the subset of the LP format produced by write_lp plus the common
/// section aliases. Throws LpFormatError with line and column.
Model parse_lp(const std::string& text);
Model import_lp(const std::filesystem::path& path);

struct Solution {
  std::optional<double> objective;
  std::string status;  ///< from a "# Status = ..." line, empty if absent
  std::map<std::string, double> values;

  /// Values in model order; variables absent from the file are 0.
  std::vector<double> to_vector(const Model& model) const;
};

/// Reads "name value" lines, an objective line of the form
/// "# Objective value = V" and an optional "# Status = S" line. Other
/// comment lines are ignored. Throws LpFormatError on malformed lines.
Solution parse_solution(const std::string& text);
Solution import_solution(const std::filesystem::path& path);
std::string write_solution(const Model& model, std::span<const double> x, double objective);
/// Solution file for a solve that ended without an optimum.
std::string write_status_only(Status status);

// ---------------------------------------------------------------------------
// External solver bridge

class BridgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes the model to `{in}`, runs the command template with `{in}` and
/// `{out}` substituted and reads the solution from `{out}`. Files live in
/// `workdir` (a fresh temporary directory when empty).
MilpResult solve_external(const Model& model, const std::string& command_template,
                          const std::filesystem::path& workdir = {});

}  // namespace tornado::milp
