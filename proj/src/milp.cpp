#include "lasercon/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace lasercon::milp {

namespace {

bool has_space(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

std::size_t MilpModel::add_variable(std::string var_name, double objective) {
  if (var_name.empty()) var_name = "x" + std::to_string(variables_.size());
  variables_.push_back({std::move(var_name)});
  objective_.push_back(objective);
  return variables_.size() - 1;
}

std::size_t MilpModel::add_constraint(std::string row_name, std::vector<Term> terms, Sense sense,
                                      double rhs) {
  if (row_name.empty()) row_name = "r" + std::to_string(constraints_.size());
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().var == t.var) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  constraints_.push_back({std::move(row_name), std::move(merged), sense, rhs});
  return constraints_.size() - 1;
}

void MilpModel::set_objective(std::size_t var, double coef) {
  if (var >= objective_.size()) throw Error(ErrorKind::InvalidArgument, "unknown variable index");
  objective_[var] = coef;
}

std::optional<std::size_t> MilpModel::find_variable(const std::string& var_name) const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].name == var_name) return j;
  }
  return std::nullopt;
}

void MilpModel::validate() const {
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].name.empty() || has_space(variables_[j].name)) {
      throw Error(ErrorKind::InvalidArgument, "variable names must be non-empty without spaces");
    }
    if (!std::isfinite(objective_[j])) {
      throw Error(ErrorKind::InvalidArgument, "objective coefficient of " + variables_[j].name +
                                                  " is not finite");
    }
  }
  for (const auto& c : constraints_) {
    if (c.name.empty() || has_space(c.name)) {
      throw Error(ErrorKind::InvalidArgument, "constraint names must be non-empty without spaces");
    }
    if (!std::isfinite(c.rhs)) {
      throw Error(ErrorKind::InvalidArgument, "constraint " + c.name + " has a non-finite rhs");
    }
    for (const Term& t : c.terms) {
      if (t.var >= variables_.size()) {
        throw Error(ErrorKind::InvalidArgument, "constraint " + c.name + " references an undeclared variable");
      }
      if (!std::isfinite(t.coef)) {
        throw Error(ErrorKind::InvalidArgument, "constraint " + c.name + " has a non-finite coefficient");
      }
    }
  }
}

double MilpModel::evaluate(const std::vector<std::uint8_t>& assignment) const {
  double v = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) {
    if (assignment.at(j)) v += objective_[j];
  }
  return v;
}

bool MilpModel::satisfies(const std::vector<std::uint8_t>& assignment, double tol) const {
  if (assignment.size() != variables_.size()) return false;
  for (const auto& c : constraints_) {
    double lhs = 0.0;
    for (const Term& t : c.terms) {
      if (assignment[t.var]) lhs += t.coef;
    }
    switch (c.sense) {
      case Sense::LessEqual:
        if (lhs > c.rhs + tol) return false;
        break;
      case Sense::GreaterEqual:
        if (lhs < c.rhs - tol) return false;
        break;
      case Sense::Equal:
        if (std::abs(lhs - c.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "Optimal";
    case Status::Feasible: return "Feasible";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::GapLimit: return "GapLimit";
  }
  return "Unknown";
}

CoverageStructure detect_coverage(const MilpModel& model) {
  const auto& rows = model.constraints();
  const std::size_t n = model.num_variables();
  CoverageStructure cs;
  std::optional<std::size_t> card_row;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].sense != Sense::Equal) continue;
    if (card_row) throw Error(ErrorKind::StructureMismatch, "more than one equality row");
    card_row = r;
  }
  if (!card_row) throw Error(ErrorKind::StructureMismatch, "no cardinality row");
  std::vector<long> position(n, -1);
  for (const Term& t : rows[*card_row].terms) {
    if (t.coef != 1.0) throw Error(ErrorKind::StructureMismatch, "cardinality row is not all ones");
    position[t.var] = static_cast<long>(cs.locations.size());
    cs.locations.push_back(t.var);
  }
  cs.cardinality = rows[*card_row].rhs;
  if (cs.cardinality != std::floor(cs.cardinality) || cs.cardinality < 0.0 ||
      cs.cardinality > static_cast<double>(cs.locations.size())) {
    throw Error(ErrorKind::StructureMismatch, "cardinality is not attainable");
  }

  std::vector<int> cover_seen(n, 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r == *card_row) continue;
    const auto& row = rows[r];
    if (row.sense != Sense::GreaterEqual || row.rhs != 0.0) {
      throw Error(ErrorKind::StructureMismatch, "row " + row.name + " is not a coverage coupling");
    }
    CoverageStructure::Row cov;
    bool have_cover = false;
    for (const Term& t : row.terms) {
      if (position[t.var] >= 0) {
        if (t.coef <= 0.0) throw Error(ErrorKind::StructureMismatch, "negative location weight");
        cov.weights.emplace_back(static_cast<std::size_t>(position[t.var]), t.coef);
      } else {
        if (have_cover || t.coef >= 0.0) {
          throw Error(ErrorKind::StructureMismatch, "row " + row.name + " needs one coverage variable");
        }
        have_cover = true;
        cov.cover = t.var;
        cov.threshold = -t.coef;
      }
    }
    if (!have_cover) throw Error(ErrorKind::StructureMismatch, "row " + row.name + " has no coverage variable");
    if (++cover_seen[cov.cover] > 1) {
      throw Error(ErrorKind::StructureMismatch, "coverage variable appears in two rows");
    }
    cs.rows.push_back(std::move(cov));
  }
  return cs;
}

namespace {

using Clock = std::chrono::steady_clock;

double relative_gap(double bound, double value) {
  return std::max(0.0, bound - value) / std::max(1.0, std::abs(value));
}

// Incremental coverage evaluator over location positions.
class CoverageEval {
 public:
  CoverageEval(const MilpModel& model, const CoverageStructure& cs) : model_(model), cs_(cs) {
    by_loc_.resize(cs.locations.size());
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
      for (const auto& [pos, a] : cs.rows[r].weights) by_loc_[pos].emplace_back(r, a);
    }
    sums_.assign(cs.rows.size(), 0.0);
    selected_.assign(cs.locations.size(), 0);
  }

  double row_value(std::size_t r) const {
    const double c = model_.objective()[cs_.rows[r].cover];
    return c > 0.0 ? c : 0.0;
  }
  bool covered(std::size_t r, double sum) const { return sum >= cs_.rows[r].threshold - 1e-9; }
  double loc_value(std::size_t pos) const { return model_.objective()[cs_.locations[pos]]; }

  double gain_add(std::size_t pos) const {
    double g = loc_value(pos);
    for (const auto& [r, a] : by_loc_[pos]) {
      if (!covered(r, sums_[r]) && covered(r, sums_[r] + a)) g += row_value(r);
    }
    return g;
  }

  void add(std::size_t pos) {
    selected_[pos] = 1;
    value_ += gain_add(pos);
    for (const auto& [r, a] : by_loc_[pos]) sums_[r] += a;
  }

  void remove(std::size_t pos) {
    selected_[pos] = 0;
    value_ -= loc_value(pos);
    for (const auto& [r, a] : by_loc_[pos]) {
      if (covered(r, sums_[r]) && !covered(r, sums_[r] - a)) value_ -= row_value(r);
      sums_[r] -= a;
    }
  }

  double value() const { return value_; }
  const std::vector<std::uint8_t>& selected() const { return selected_; }

  std::vector<std::uint8_t> assignment() const {
    std::vector<std::uint8_t> x(model_.num_variables(), 0);
    for (std::size_t p = 0; p < cs_.locations.size(); ++p) x[cs_.locations[p]] = selected_[p];
    for (std::size_t r = 0; r < cs_.rows.size(); ++r) {
      if (covered(r, sums_[r]) && model_.objective()[cs_.rows[r].cover] > 0.0) x[cs_.rows[r].cover] = 1;
    }
    return x;
  }

 private:
  const MilpModel& model_;
  const CoverageStructure& cs_;
  std::vector<std::vector<std::pair<std::size_t, double>>> by_loc_;
  std::vector<double> sums_;
  std::vector<std::uint8_t> selected_;
  double value_ = 0.0;
};

std::vector<std::uint8_t> greedy_swap(const MilpModel& model, const CoverageStructure& cs) {
  CoverageEval eval(model, cs);
  const auto k = static_cast<std::size_t>(cs.cardinality);
  const std::size_t n = cs.locations.size();
  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = n;
    double best_gain = -kInf;
    for (std::size_t p = 0; p < n; ++p) {
      if (eval.selected()[p]) continue;
      const double g = eval.gain_add(p);
      if (g > best_gain + 1e-12) {
        best_gain = g;
        best = p;
      }
    }
    eval.add(best);
  }

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t out = 0; out < n && !improved; ++out) {
      if (!eval.selected()[out]) continue;
      for (std::size_t in = 0; in < n; ++in) {
        if (eval.selected()[in]) continue;
        const double before = eval.value();
        eval.remove(out);
        eval.add(in);
        if (eval.value() > before + 1e-9 * std::max(1.0, std::abs(before))) {
          improved = true;
          break;
        }
        eval.remove(in);
        eval.add(out);
      }
    }
  }
  return eval.assignment();
}

LpProblem relaxation(const MilpModel& model, const std::vector<double>& c) {
  LpProblem lp;
  lp.c = c;
  lp.lo.assign(model.num_variables(), 0.0);
  lp.hi.assign(model.num_variables(), 1.0);
  for (const auto& con : model.constraints()) lp.rows.push_back({con.terms, con.sense, con.rhs});
  return lp;
}

double trivial_bound(const MilpModel& model) {
  double b = 0.0;
  for (double c : model.objective()) b += std::max(c, 0.0);
  return b;
}

struct Node {
  double bound;
  std::size_t id;
  std::vector<std::int8_t> fix;  // -1 free, else fixed value
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const Limits& limits)
      : model_(model), limits_(limits), start_(Clock::now()) {
    const std::size_t n = model.num_variables();
    scaled_.resize(n);
    integral_ = true;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = model.objective()[j];
      scaled_[j] = limits.objective_scale > 0.0 ? std::round(c * limits.objective_scale) : c;
      if (std::abs(scaled_[j]) > 4.0e15) {
        throw Error(ErrorKind::InvalidArgument, "objective coefficient too large for the scaled search");
      }
      if (scaled_[j] != std::floor(scaled_[j])) integral_ = false;
    }
    unscale_ = limits.objective_scale > 0.0 ? limits.objective_scale : 1.0;
    lp_ = relaxation(model, scaled_);
    try {
      cover_ = detect_coverage(model);
    } catch (const Error&) {
      cover_.reset();
    }
  }

  MilpSolution run() {
    const std::size_t n = model_.num_variables();
    if (cover_) offer(greedy_swap(model_, *cover_));

    if (limits_.bound == BoundMode::Combinatorial && cover_ && combinatorial_ok()) {
      return run_combinatorial();
    }

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push({kInf, next_id_++, std::vector<std::int8_t>(n, -1)});
    while (!open.empty()) {
      check_limits(open.empty() ? -kInf : open.top().bound);
      Node node = open.top();
      open.pop();
      if (pruned(node.bound)) continue;
      ++nodes_;

      for (std::size_t j = 0; j < n; ++j) {
        lp_.lo[j] = node.fix[j] < 0 ? 0.0 : node.fix[j];
        lp_.hi[j] = node.fix[j] < 0 ? 1.0 : node.fix[j];
      }
      const LpResult lp = solve_lp(lp_);
      if (lp.status == LpStatus::Infeasible) continue;

      double bound = node.bound;
      std::size_t branch = n;
      if (lp.status == LpStatus::Optimal) {
        bound = std::min(node.bound, effective(lp.objective));
        if (pruned(bound)) continue;
        branch = pick_branch(lp.x, node.fix);
        std::vector<std::uint8_t> rounded(n);
        for (std::size_t j = 0; j < n; ++j) rounded[j] = lp.x[j] > 0.5 ? 1 : 0;
        offer(rounded);
        if (branch == n) continue;  // integral LP optimum
      } else {
        for (std::size_t j = 0; j < n && branch == n; ++j) {
          if (node.fix[j] < 0) branch = j;
        }
        if (branch == n) {
          std::vector<std::uint8_t> x(node.fix.begin(), node.fix.end());
          offer(x);
          continue;
        }
      }
      if (pruned(bound)) continue;

      for (std::int8_t v : {std::int8_t{1}, std::int8_t{0}}) {
        Node child{bound, next_id_++, node.fix};
        child.fix[branch] = v;
        open.push(std::move(child));
      }
      if (limits_.gap_target > 0.0 && incumbent_ && !open.empty()) {
        const double global = std::max(open.top().bound, best_scaled_);
        if (relative_gap(global / unscale_, best_scaled_ / unscale_) <= limits_.gap_target) {
          return finish(Status::GapLimit, global);
        }
      }
    }
    return finish(Status::Optimal, best_scaled_);
  }

 private:
  double effective(double bound) const {
    return integral_ ? std::floor(bound + 1e-6) : bound;
  }

  bool pruned(double bound) const {
    if (!incumbent_) return false;
    return bound <= best_scaled_ + 1e-9 * std::max(1.0, std::abs(best_scaled_));
  }

  void offer(const std::vector<std::uint8_t>& x) {
    if (!model_.satisfies(x)) return;
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j]) v += scaled_[j];
    }
    if (!incumbent_ || v > best_scaled_) {
      incumbent_ = x;
      best_scaled_ = v;
    }
  }

  std::size_t pick_branch(const std::vector<double>& x, const std::vector<std::int8_t>& fix) const {
    std::size_t best = x.size();
    double best_frac = 1e-6;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (fix[j] >= 0) continue;
      const double frac = std::abs(x[j] - std::round(x[j]));
      if (frac > best_frac + 1e-12 ||
          (best < x.size() && std::abs(frac - best_frac) <= 1e-12 &&
           std::abs(scaled_[j]) > std::abs(scaled_[best]))) {
        best_frac = frac;
        best = j;
      }
    }
    return best;
  }

  void check_limits(double open_bound) {
    const double elapsed = std::chrono::duration<double>(Clock::now() - start_).count();
    if (nodes_ < limits_.node_cap && elapsed < limits_.time_cap) return;
    MilpSolution partial = package(incumbent_ ? Status::Feasible : Status::Infeasible,
                                   std::max(open_bound, best_scaled_));
    throw LimitsExceeded(nodes_ >= limits_.node_cap ? "node cap reached" : "time cap reached",
                         std::move(partial));
  }

  MilpSolution package(Status status, double bound_scaled) const {
    MilpSolution sol;
    sol.status = status;
    sol.nodes = nodes_;
    if (incumbent_) {
      sol.assignment = *incumbent_;
      sol.objective_value = model_.evaluate(*incumbent_);
    }
    // Rounding the objective moves each coefficient by at most half a unit.
    const double slack = limits_.objective_scale > 0.0
                             ? 0.5 * static_cast<double>(model_.num_variables()) / unscale_
                             : 0.0;
    sol.bound = bound_scaled == kInf ? trivial_bound(model_)
                                     : std::max(bound_scaled / unscale_ + slack, sol.objective_value);
    sol.gap = incumbent_ ? relative_gap(sol.bound, sol.objective_value) : kInf;
    return sol;
  }

  MilpSolution finish(Status status, double bound_scaled) const {
    if (!incumbent_) {
      MilpSolution sol;
      sol.status = Status::Infeasible;
      sol.nodes = nodes_;
      return sol;
    }
    if (status == Status::Optimal) {
      MilpSolution sol;
      sol.status = Status::Optimal;
      sol.nodes = nodes_;
      sol.assignment = *incumbent_;
      sol.objective_value = model_.evaluate(*incumbent_);
      sol.bound = sol.objective_value;
      sol.gap = 0.0;
      return sol;
    }
    return package(status, bound_scaled);
  }

  bool combinatorial_ok() const {
    for (std::size_t j = 0; j < model_.num_variables(); ++j) {
      if (scaled_[j] < 0.0) return false;
    }
    for (std::size_t p : cover_->locations) {
      if (scaled_[p] != 0.0) return false;
    }
    return true;
  }

  // Bound for coverage models: value already covered by the fixed-in set plus
  // the best k free-slot gains, capped by everything still reachable.
  MilpSolution run_combinatorial() {
    const CoverageStructure& cs = *cover_;
    const std::size_t L = cs.locations.size();
    const auto k_total = static_cast<std::size_t>(cs.cardinality);
    std::vector<std::vector<std::pair<std::size_t, double>>> by_loc(L);
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
      for (const auto& [pos, a] : cs.rows[r].weights) by_loc[pos].emplace_back(r, a);
    }
    auto row_c = [&](std::size_t r) { return scaled_[cs.rows[r].cover]; };
    auto covered = [&](std::size_t r, double s) { return s >= cs.rows[r].threshold - 1e-9; };

    struct Eval {
      double bound;
      std::size_t branch;
      std::vector<std::uint8_t> leaf;
    };
    auto evaluate = [&](const std::vector<std::int8_t>& fix) -> std::optional<Eval> {
      std::size_t ones = 0, free = 0;
      for (std::size_t p = 0; p < L; ++p) {
        ones += fix[p] == 1;
        free += fix[p] < 0;
      }
      if (ones > k_total || ones + free < k_total) return std::nullopt;
      std::vector<double> fixed_sum(cs.rows.size(), 0.0), reach_sum(cs.rows.size(), 0.0);
      for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        for (const auto& [pos, a] : cs.rows[r].weights) {
          if (fix[pos] == 1) fixed_sum[r] += a;
          if (fix[pos] != 0) reach_sum[r] += a;
        }
      }
      double base = 0.0, reachable = 0.0;
      for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        if (covered(r, fixed_sum[r])) base += row_c(r);
        if (covered(r, reach_sum[r])) reachable += row_c(r);
      }
      const std::size_t k = k_total - ones;
      if (k == 0 || free == k) {
        std::vector<std::uint8_t> x(model_.num_variables(), 0);
        for (std::size_t p = 0; p < L; ++p) x[cs.locations[p]] = (k == 0 ? fix[p] == 1 : fix[p] != 0) ? 1 : 0;
        for (std::size_t r = 0; r < cs.rows.size(); ++r) {
          const double s = k == 0 ? fixed_sum[r] : reach_sum[r];
          if (covered(r, s) && row_c(r) > 0.0) x[cs.rows[r].cover] = 1;
        }
        return Eval{k == 0 ? base : reachable, L, std::move(x)};
      }
      std::vector<std::pair<double, std::size_t>> gains;
      for (std::size_t p = 0; p < L; ++p) {
        if (fix[p] >= 0) continue;
        double g = 0.0;
        for (const auto& [r, a] : by_loc[p]) {
          if (!covered(r, fixed_sum[r]) && covered(r, reach_sum[r])) g += row_c(r);
        }
        gains.emplace_back(g, p);
      }
      std::sort(gains.begin(), gains.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      double top = base;
      for (std::size_t i = 0; i < k; ++i) top += gains[i].first;
      return Eval{std::min(top, reachable), gains.front().second, {}};
    };

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push({kInf, next_id_++, std::vector<std::int8_t>(L, -1)});
    while (!open.empty()) {
      check_limits(open.top().bound);
      Node node = open.top();
      open.pop();
      if (pruned(node.bound)) continue;
      ++nodes_;
      const auto ev = evaluate(node.fix);
      if (!ev) continue;
      if (!ev->leaf.empty()) {
        offer(ev->leaf);
        continue;
      }
      const double bound = std::min(node.bound, effective(ev->bound));
      if (pruned(bound)) continue;
      for (std::int8_t v : {std::int8_t{1}, std::int8_t{0}}) {
        Node child{bound, next_id_++, node.fix};
        child.fix[ev->branch] = v;
        open.push(std::move(child));
      }
      if (limits_.gap_target > 0.0 && incumbent_ && !open.empty()) {
        const double global = std::max(open.top().bound, best_scaled_);
        if (relative_gap(global / unscale_, best_scaled_ / unscale_) <= limits_.gap_target) {
          return finish(Status::GapLimit, global);
        }
      }
    }
    return finish(Status::Optimal, best_scaled_);
  }

  const MilpModel& model_;
  Limits limits_;
  Clock::time_point start_;
  std::vector<double> scaled_;
  double unscale_ = 1.0;
  bool integral_ = true;
  LpProblem lp_;
  std::optional<CoverageStructure> cover_;
  std::optional<std::vector<std::uint8_t>> incumbent_;
  double best_scaled_ = -kInf;
  std::size_t nodes_ = 0;
  std::size_t next_id_ = 0;
};

}  // namespace

MilpSolution solve_exact(const MilpModel& model, const Limits& limits) {
  model.validate();
  BranchAndBound bb(model, limits);
  return bb.run();
}

MilpSolution solve_heuristic(const MilpModel& model, StructureHint hint) {
  model.validate();
  const std::size_t n = model.num_variables();
  MilpSolution sol;

  LpProblem lp = relaxation(model, model.objective());
  const LpResult root = solve_lp(lp);
  if (root.status == LpStatus::Infeasible) {
    sol.status = Status::Infeasible;
    return sol;
  }
  const double bound = root.status == LpStatus::Optimal ? root.objective : trivial_bound(model);

  std::vector<std::uint8_t> best;
  if (hint == StructureHint::CoverageCardinality) {
    const CoverageStructure cs = detect_coverage(model);
    best = greedy_swap(model, cs);
  } else {
    // LP-guided dive: fix the least fractional variable, flip once on failure.
    std::vector<std::int8_t> fix(n, -1);
    std::vector<std::pair<std::size_t, bool>> trail;  // (var, flipped)
    LpResult cur = root;
    for (std::size_t guard = 0; guard < 4 * n + 4; ++guard) {
      if (cur.status == LpStatus::Infeasible) {
        while (!trail.empty() && trail.back().second) {
          fix[trail.back().first] = -1;
          trail.pop_back();
        }
        if (trail.empty()) break;
        auto& [var, flipped] = trail.back();
        fix[var] = static_cast<std::int8_t>(1 - fix[var]);
        flipped = true;
      } else if (cur.status == LpStatus::Optimal) {
        std::vector<std::uint8_t> rounded(n);
        for (std::size_t j = 0; j < n; ++j) rounded[j] = cur.x[j] > 0.5 ? 1 : 0;
        if (model.satisfies(rounded)) {
          best = rounded;
          break;
        }
        std::size_t pick = n;
        double closest = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (fix[j] >= 0) continue;
          const double frac = std::abs(cur.x[j] - std::round(cur.x[j]));
          if (frac < closest) {
            closest = frac;
            pick = j;
          }
        }
        if (pick == n) break;
        fix[pick] = static_cast<std::int8_t>(std::round(cur.x[pick]));
        trail.emplace_back(pick, false);
      } else {
        break;
      }
      for (std::size_t j = 0; j < n; ++j) {
        lp.lo[j] = fix[j] < 0 ? 0.0 : fix[j];
        lp.hi[j] = fix[j] < 0 ? 1.0 : fix[j];
      }
      cur = solve_lp(lp);
    }
  }

  if (best.empty() || !model.satisfies(best)) {
    sol.status = Status::Infeasible;
    sol.bound = bound;
    return sol;
  }
  sol.assignment = std::move(best);
  sol.objective_value = model.evaluate(sol.assignment);
  sol.bound = std::max(bound, sol.objective_value);
  sol.gap = relative_gap(sol.bound, sol.objective_value);
  sol.status = Status::Feasible;
  return sol;
}

}  // namespace lasercon::milp
