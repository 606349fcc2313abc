#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace lasercon::milp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
  friend bool operator==(const Term&, const Term&) = default;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LpRow {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

/// maximize c.x subject to rows and lo <= x <= hi. Lower bounds must be finite.
struct LpProblem {
  std::vector<double> c;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<LpRow> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Dense-tableau bounded-variable primal simplex with a phase-one on
/// artificials. Dantzig pricing; switches to Bland's rule after a run of
/// degenerate pivots.
LpResult solve_lp(const LpProblem& problem);

}  // namespace lasercon::milp
