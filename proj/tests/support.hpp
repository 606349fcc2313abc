#pragma once

// Random instance generators and brute-force oracles shared by the unit tests
// and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "lasercon/formulations.hpp"
#include "lasercon/milp.hpp"

namespace lasercon::oracle {

/// Pure binary model with a mix of <=, >= and = rows and integer-ish data.
inline milp::MilpModel random_binary_model(std::mt19937_64& gen, std::size_t n, std::size_t rows) {
  std::uniform_int_distribution<int> coef(-5, 9), pick(0, 2), row_kind(0, 9);
  milp::MilpModel m;
  for (std::size_t j = 0; j < n; ++j) m.add_variable("v" + std::to_string(j), coef(gen));
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<milp::Term> terms;
    int total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (pick(gen) != 0) continue;
      const int a = std::uniform_int_distribution<int>(1, 6)(gen);
      terms.push_back({j, static_cast<double>(a)});
      total += a;
    }
    if (terms.empty()) continue;
    const int kind = row_kind(gen);
    if (kind < 7) {
      m.add_constraint("r" + std::to_string(r), terms, milp::Sense::LessEqual,
                       std::uniform_int_distribution<int>(0, total)(gen));
    } else if (kind < 9) {
      m.add_constraint("r" + std::to_string(r), terms, milp::Sense::GreaterEqual,
                       std::uniform_int_distribution<int>(0, total / 2)(gen));
    } else {
      m.add_constraint("r" + std::to_string(r), terms, milp::Sense::Equal,
                       std::uniform_int_distribution<int>(0, total)(gen));
    }
  }
  return m;
}

struct Enumerated {
  bool feasible = false;
  double best = -std::numeric_limits<double>::infinity();
};

/// Exhaustive search over all 2^n assignments, evaluated from the raw rows.
inline Enumerated enumerate_model(const milp::MilpModel& m) {
  const std::size_t n = m.num_variables();
  Enumerated out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = true;
    for (const auto& row : m.constraints()) {
      double lhs = 0.0;
      for (const auto& t : row.terms) lhs += ((mask >> t.var) & 1u) ? t.coef : 0.0;
      if ((row.sense == milp::Sense::LessEqual && lhs > row.rhs + 1e-9) ||
          (row.sense == milp::Sense::GreaterEqual && lhs < row.rhs - 1e-9) ||
          (row.sense == milp::Sense::Equal && std::abs(lhs - row.rhs) > 1e-9)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += ((mask >> j) & 1u) ? m.objective()[j] : 0.0;
    out.feasible = true;
    out.best = std::max(out.best, obj);
  }
  return out;
}

/// Random MCLP data: sparse gate, positive rewards, thresholds in {1, 2}
/// unless `unit_thresholds`.
inline formulations::MclpInstance random_mclp(std::mt19937_64& gen, std::size_t slots, std::size_t steps,
                                              std::size_t debris, std::size_t platforms,
                                              bool unit_thresholds) {
  formulations::MclpInstance inst;
  inst.slots = slots;
  inst.steps = steps;
  inst.debris = debris;
  inst.platforms = platforms;
  inst.gate = access::FeasibilityTensor(steps, slots, debris);
  std::uniform_real_distribution<double> u(0.0, 1.0), reward(0.5, 10.0);
  for (std::size_t t = 0; t < steps; ++t) {
    for (std::size_t d = 0; d < debris; ++d) {
      inst.reward.push_back(std::round(reward(gen) * 100.0) / 100.0);
      inst.threshold.push_back(unit_thresholds || u(gen) < 0.7 ? 1.0 : 2.0);
      for (std::size_t s = 0; s < slots; ++s) {
        if (u(gen) < 0.15) inst.gate.set(t, s, d, true);
      }
    }
  }
  return inst;
}

/// Coverage value of a placement computed straight from the instance data.
inline double coverage_value(const formulations::MclpInstance& inst, const std::vector<std::size_t>& placement) {
  double total = 0.0;
  for (std::size_t t = 0; t < inst.steps; ++t) {
    for (std::size_t d = 0; d < inst.debris; ++d) {
      std::size_t hits = 0;
      for (std::size_t s : placement) hits += inst.gate.get(t, s, d) ? 1 : 0;
      if (static_cast<double>(hits) >= inst.threshold[t * inst.debris + d]) total += inst.reward[t * inst.debris + d];
    }
  }
  return total;
}

/// Best coverage over every placement of exactly `inst.platforms` slots.
inline double brute_force_mclp(const formulations::MclpInstance& inst) {
  double best = 0.0;
  std::vector<std::size_t> pick(inst.platforms);
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  if (pick.size() > inst.slots) return 0.0;
  while (true) {
    best = std::max(best, coverage_value(inst, pick));
    std::size_t i = pick.size();
    while (i > 0 && pick[i - 1] == inst.slots - pick.size() + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace lasercon::oracle
