#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lasercon/error.hpp"
#include "lasercon/lp.hpp"

namespace lasercon::milp {

struct Variable {
  std::string name;
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;  // sorted by variable, duplicates merged
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Pure binary program, always maximized.
class MilpModel {
 public:
  std::string name = "lasercon";
  // Free-form annotations carried through MPS export (e.g. objective_scale).
  std::map<std::string, std::string> metadata;

  std::size_t add_variable(std::string var_name, double objective = 0.0);
  std::size_t add_constraint(std::string row_name, std::vector<Term> terms, Sense sense, double rhs);
  void set_objective(std::size_t var, double coef);

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& objective() const { return objective_; }
  std::optional<std::size_t> find_variable(const std::string& var_name) const;

  /// Throws InvalidArgument on dangling references or non-finite numbers.
  void validate() const;

  double evaluate(const std::vector<std::uint8_t>& assignment) const;
  bool satisfies(const std::vector<std::uint8_t>& assignment, double tol = 1e-9) const;

  friend bool operator==(const MilpModel&, const MilpModel&) = default;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> objective_;
};

enum class Status { Optimal, Feasible, Infeasible, Unbounded, GapLimit };

std::string to_string(Status status);

struct MilpSolution {
  Status status = Status::Infeasible;
  std::vector<std::uint8_t> assignment;
  double objective_value = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  std::size_t nodes = 0;
};

enum class BoundMode { Lp, Combinatorial };

struct Limits {
  std::size_t node_cap = 1'000'000;
  double time_cap = 600.0;  // s
  double gap_target = 0.0;  // relative; 0 asks for a proven optimum
  BoundMode bound = BoundMode::Lp;
  // Objective coefficients are multiplied by this and rounded before the
  // search, which lets the bound be floored; 0 leaves them as given.
  double objective_scale = 0.0;
};

/// Raised when node or time limits stop the search before the gap closes.
class LimitsExceeded : public Error {
 public:
  LimitsExceeded(const std::string& what, MilpSolution incumbent)
      : Error(ErrorKind::LimitsExceeded, what), incumbent_(std::move(incumbent)) {}
  const MilpSolution& incumbent() const { return incumbent_; }

 private:
  MilpSolution incumbent_;
};

/// Best-first branch-and-bound. Deterministic for a fixed model and limits.
MilpSolution solve_exact(const MilpModel& model, const Limits& limits = {});

enum class StructureHint { CoverageCardinality, Generic };

/// Greedy + pairwise swap for coverage/cardinality models, LP-guided diving
/// otherwise. Status is Feasible; the bound comes from the LP relaxation.
MilpSolution solve_heuristic(const MilpModel& model, StructureHint hint);

/// Coverage structure: one all-ones equality row over location variables and
/// one ">= 0" coupling row per coverage variable.
struct CoverageStructure {
  std::vector<std::size_t> locations;
  double cardinality = 0.0;
  struct Row {
    std::size_t cover = 0;                  // coverage variable
    double threshold = 1.0;                 // S
    std::vector<std::pair<std::size_t, double>> weights;  // (location position, a)
  };
  std::vector<Row> rows;
};

/// Throws StructureMismatch when the model is not a coverage/cardinality model.
CoverageStructure detect_coverage(const MilpModel& model);

// MPS interchange.
std::string to_mps(const MilpModel& model);
MilpModel parse_mps(const std::string& text);
void export_mps(const MilpModel& model, const std::filesystem::path& path);
MilpModel import_mps(const std::filesystem::path& path);

/// Reads "name value" lines (blank and '#' lines skipped); variables absent
/// from the file are 0.
std::vector<std::uint8_t> import_solution(const MilpModel& model, const std::filesystem::path& path);

}  // namespace lasercon::milp
