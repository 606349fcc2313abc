#include "lasercon/lp.hpp"

#include <algorithm>
#include <cmath>

#include "lasercon/error.hpp"

namespace lasercon::milp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr std::size_t kDegenerateSwitch = 50;

enum class At : unsigned char { Lower, Upper, Basic };

class Tableau {
 public:
  Tableau(const LpProblem& p) {
    const std::size_t n = p.c.size();
    m_ = p.rows.size();
    n_struct_ = n;

    // Residual of each row with structurals at their lower bounds; a slack
    // that can absorb it starts basic, other rows get an artificial.
    std::vector<double> resid(m_);
    std::vector<bool> needs_art(m_);
    std::size_t slacks = 0, arts = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = p.rows[i];
      double r = row.rhs;
      for (const Term& term : row.terms) r -= term.coef * p.lo[term.var];
      resid[i] = r;
      slacks += row.sense != Sense::Equal;
      needs_art[i] = row.sense == Sense::Equal || (row.sense == Sense::LessEqual && r < 0.0) ||
                     (row.sense == Sense::GreaterEqual && r > 0.0);
      arts += needs_art[i];
    }
    cols_ = n + slacks + arts;
    art_begin_ = n + slacks;

    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, kInf);
    for (std::size_t j = 0; j < n; ++j) {
      lo_[j] = p.lo[j];
      hi_[j] = p.hi[j];
    }
    at_.assign(cols_, At::Lower);
    value_.assign(cols_, 0.0);
    for (std::size_t j = 0; j < n; ++j) value_[j] = lo_[j];

    t_.assign(m_ * cols_, 0.0);
    beta_.assign(m_, 0.0);
    basis_.assign(m_, 0);

    std::size_t slack = n, art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = p.rows[i];
      for (const Term& term : row.terms) at(i, term.var) += term.coef;
      std::size_t own = cols_;
      if (row.sense == Sense::LessEqual) at(i, own = slack++) = 1.0;
      if (row.sense == Sense::GreaterEqual) at(i, own = slack++) = -1.0;
      double r = resid[i];
      if (!needs_art[i]) {
        // Scale the row so the slack carries +1 and a nonnegative value.
        if (at(i, own) < 0.0) {
          for (std::size_t j = 0; j < art_begin_; ++j) at(i, j) = -at(i, j);
          r = -r;
        }
        basis_[i] = own;
        at_[own] = At::Basic;
        beta_[i] = r;
        continue;
      }
      // Artificial carries |resid|; flip the row so its coefficient is +1.
      if (r < 0.0) {
        for (std::size_t j = 0; j < art_begin_; ++j) at(i, j) = -at(i, j);
        r = -r;
      }
      at(i, art) = 1.0;
      basis_[i] = art;
      at_[art] = At::Basic;
      beta_[i] = r;
      ++art;
    }
  }

  LpResult run(const std::vector<double>& c, std::size_t max_iter) {
    LpResult result;
    // Phase one: maximize -sum(artificials).
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t j = art_begin_; j < cols_; ++j) phase1[j] = -1.0;
    auto status = iterate(phase1, max_iter, result.iterations);
    if (status == LpStatus::IterationLimit) {
      result.status = status;
      return result;
    }
    double infeas = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= art_begin_) infeas += beta_[i];
    }
    for (std::size_t j = art_begin_; j < cols_; ++j) {
      if (at_[j] != At::Basic) infeas += value_[j];
    }
    if (infeas > kFeasTol) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    for (std::size_t j = art_begin_; j < cols_; ++j) {
      hi_[j] = 0.0;
      if (at_[j] != At::Basic) {
        at_[j] = At::Lower;
        value_[j] = 0.0;
      }
    }

    std::vector<double> phase2(cols_, 0.0);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t j = 0; j < n_struct_; ++j) phase2[j] = c[j] / scale;
    status = iterate(phase2, max_iter, result.iterations);
    result.status = status;
    if (status != LpStatus::Optimal) return result;

    result.x.assign(n_struct_, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j) {
      if (at_[j] != At::Basic) result.x[j] = value_[j];
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_struct_) result.x[basis_[i]] = beta_[i];
    }
    for (std::size_t j = 0; j < n_struct_; ++j) {
      result.x[j] = std::clamp(result.x[j], lo_[j], hi_[j]);
      result.objective += c[j] * result.x[j];
    }
    return result;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

  LpStatus iterate(const std::vector<double>& cost, std::size_t max_iter, std::size_t& iterations) {
    // Reduced costs d_j = c_j - c_B B^-1 A_j.
    std::vector<double> d(cost);
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d[j] -= cb * row[j];
    }

    std::size_t degenerate = 0;
    while (true) {
      if (iterations >= max_iter) return LpStatus::IterationLimit;
      const bool bland = degenerate >= kDegenerateSwitch;

      std::size_t enter = cols_;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (at_[j] == At::Basic || hi_[j] - lo_[j] <= 0.0) continue;
        const bool can_up = at_[j] == At::Lower && d[j] > kCostTol;
        const bool can_down = at_[j] == At::Upper && d[j] < -kCostTol;
        if (!can_up && !can_down) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          enter = j;
        }
      }
      if (enter == cols_) return LpStatus::Optimal;
      ++iterations;

      const double dir = at_[enter] == At::Lower ? 1.0 : -1.0;
      double theta = hi_[enter] - lo_[enter];
      std::size_t leave_row = m_;
      double leave_alpha = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = at(i, enter) * dir;
        if (std::abs(alpha) <= kPivotTol) continue;
        const std::size_t b = basis_[i];
        double limit;
        if (alpha > 0.0) {
          limit = (beta_[i] - lo_[b]) / alpha;
        } else {
          if (hi_[b] == kInf) continue;
          limit = (hi_[b] - beta_[i]) / -alpha;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (leave_row != m_ && limit <= theta + 1e-12) {
          take = bland ? b < basis_[leave_row] : std::abs(alpha) > std::abs(leave_alpha);
        }
        if (take) {
          theta = limit;
          leave_row = i;
          leave_alpha = alpha;
        }
      }
      if (theta == kInf) return LpStatus::Unbounded;
      degenerate = theta <= 1e-12 ? degenerate + 1 : 0;

      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= at(i, enter) * dir * theta;

      if (leave_row == m_) {
        // Bound flip, basis unchanged.
        if (at_[enter] == At::Lower) {
          at_[enter] = At::Upper;
          value_[enter] = hi_[enter];
        } else {
          at_[enter] = At::Lower;
          value_[enter] = lo_[enter];
        }
        continue;
      }

      const std::size_t leaving = basis_[leave_row];
      const double entering_value = value_[enter] + dir * theta;
      if (leaving >= art_begin_) {
        // An artificial that leaves never needs to come back.
        hi_[leaving] = 0.0;
        at_[leaving] = At::Lower;
        value_[leaving] = 0.0;
      } else if (leave_alpha > 0.0) {
        at_[leaving] = At::Lower;
        value_[leaving] = lo_[leaving];
      } else {
        at_[leaving] = At::Upper;
        value_[leaving] = hi_[leaving];
      }
      at_[enter] = At::Basic;
      basis_[leave_row] = enter;
      beta_[leave_row] = entering_value;
      pivot(leave_row, enter, d);
    }
  }

  void pivot(std::size_t r, std::size_t col, std::vector<double>& d) {
    double* prow = &t_[r * cols_];
    const double inv = 1.0 / prow[col];
    // Constraint rows stay sparse, so only touch the pivot row's nonzeros.
    nz_.clear();
    for (std::size_t j = 0; j < cols_; ++j) {
      // Fixed nonbasic columns can never enter, so their entries go stale.
      if (prow[j] == 0.0 || (at_[j] != At::Basic && hi_[j] <= lo_[j] && j != col)) continue;
      prow[j] *= inv;
      nz_.push_back(j);
    }
    prow[col] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[col];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[col] = 0.0;
    }
    const double f = d[col];
    if (f != 0.0) {
      for (std::size_t j : nz_) d[j] -= f * prow[j];
      d[col] = 0.0;
    }
  }

  std::size_t m_ = 0;
  std::size_t n_struct_ = 0;
  std::size_t cols_ = 0;
  std::size_t art_begin_ = 0;
  std::vector<double> lo_, hi_, value_;
  std::vector<At> at_;
  std::vector<double> t_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
};

}  // namespace

LpResult solve_lp(const LpProblem& problem) {
  const std::size_t n = problem.c.size();
  if (problem.lo.size() != n || problem.hi.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "LP bound vectors do not match the objective length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(problem.lo[j]) || problem.hi[j] < problem.lo[j]) {
      LpResult r;
      r.status = LpStatus::Infeasible;
      if (!std::isfinite(problem.lo[j])) {
        throw Error(ErrorKind::InvalidArgument, "LP lower bounds must be finite");
      }
      return r;
    }
  }
  for (const auto& row : problem.rows) {
    for (const Term& t : row.terms) {
      if (t.var >= n) throw Error(ErrorKind::InvalidArgument, "LP row references unknown variable");
    }
  }
  Tableau tableau(problem);
  const std::size_t max_iter = 100 * (problem.rows.size() + n) + 10000;
  return tableau.run(problem.c, max_iter);
}

}  // namespace lasercon::milp
