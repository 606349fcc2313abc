#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lasercon/ablation.hpp"
#include "lasercon/access.hpp"
#include "lasercon/astro.hpp"
#include "lasercon/milp.hpp"
#include "lasercon/reward.hpp"

namespace lasercon::formulations {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// ---------------------------------------------------------------------------
// Shared engagement machinery. The CLSP tree and the step-by-step scheduler
// both go through score_candidates so that the two agree on every slot.

struct EngagementContext {
  astro::TimeGrid grid;
  ablation::LaserSpec laser;
  access::AccessParams access;
  const reward::RewardContext* rewards = nullptr;
  std::size_t engager_cap = access::kUnlimitedCap;
  // Drop engagers whose solo engagement would raise the periapsis.
  bool wprime_gate = false;
  astro::AstroConstants k;
};

struct ScoredCandidate {
  access::CandidateSlot slot;
  reward::RewardTerms terms;
  double reward = 0.0;
  double h_before = 0.0;  // km
};

/// Engagers able to reach the debris state (LOS, range, optional W' gate).
std::vector<access::Engager> feasible_engagers(const EngagementContext& ctx,
                                               const ablation::DebrisBody& body,
                                               const astro::StateVector& debris_state,
                                               std::span<const access::Engager> engagers);

/// No-engagement slot first, then every engager subset up to the cap, each
/// with its reward. `engagers` must already be feasible.
std::vector<ScoredCandidate> score_candidates(const EngagementContext& ctx,
                                              const ablation::DebrisBody& body,
                                              const astro::StateVector& debris_state,
                                              std::span<const access::Engager> engagers);

/// Orbit after an engagement at `step`, or nullopt when the result is open.
std::optional<astro::Track> track_after(const access::CandidateSlot& slot,
                                        const astro::AstroConstants& k = {});

// ---------------------------------------------------------------------------
// Concurrent location-scheduling problem.

struct ClspNode {
  std::size_t parent = kNone;         // index in the previous layer, kNone at t0
  std::vector<std::size_t> engagers;  // platform slots required; empty = no change
  double reward = 0.0;                // reward of the parent -> this transition
};

struct ClspInstance {
  std::size_t steps = 0;
  std::size_t slots = 0;
  std::size_t debris = 0;
  std::size_t platforms = 0;
  // layers[t][d][j]; layers[0][d] holds the single initial slot.
  std::vector<std::vector<std::vector<ClspNode>>> layers;
  access::FeasibilityTensor w;

  void validate() const;
  std::size_t tree_size() const;
};

enum class ClspEncoding {
  Sparse,  // relocation variables only along tree edges
  Dense,   // every (i, j) pair between consecutive layers; non-edges penalized
};

struct ClspModel {
  struct XVar {
    std::size_t t, d, i, j, var;
  };
  milp::MilpModel model;
  std::vector<std::size_t> z;  // per slot
  std::vector<std::size_t> y;  // [(t*S + s)*D + d], kNone when omitted
  std::vector<XVar> x;
};

ClspModel build_clsp_model(const ClspInstance& instance, ClspEncoding encoding = ClspEncoding::Sparse);

struct ClspEngagement {
  std::size_t step = 0;
  std::size_t debris = 0;
  std::size_t node = 0;  // index in layers[step + 1][debris]
  std::vector<std::size_t> engagers;
  double reward = 0.0;
};

struct ClspSchedule {
  std::vector<std::size_t> placement;
  std::vector<std::vector<std::size_t>> paths;  // [d][t] node index
  std::vector<ClspEngagement> engagements;
  double objective = 0.0;
};

ClspSchedule decode_clsp(const ClspInstance& instance, const ClspModel& model,
                         const milp::MilpSolution& solution);

struct ClspCaps {
  std::size_t max_tree_slots = 20000;
  std::size_t max_cells = 200000;  // T*S*D
};

/// Expands every debris' candidate-slot tree over the grid against all
/// platform slots. Throws InstanceTooLarge with the measured size.
ClspInstance build_clsp(const EngagementContext& ctx, std::span<const ablation::DebrisBody> debris,
                        std::span<const astro::OrbitElements> slot_elements, std::size_t platforms,
                        const ClspCaps& caps = {});

// ---------------------------------------------------------------------------
// Maximal covering location problem.

struct MclpInstance {
  std::size_t slots = 0;
  std::size_t steps = 0;
  std::size_t debris = 0;
  std::size_t platforms = 0;
  std::vector<double> reward;     // [t*D + d]
  std::vector<double> threshold;  // [t*D + d], S_td >= 1
  access::FeasibilityTensor gate;

  void validate() const;
};

struct MclpModel {
  milp::MilpModel model;
  std::vector<std::size_t> z;
  std::vector<std::size_t> x;  // [t*D + d]
};

MclpModel build_mclp_model(const MclpInstance& instance);

/// Objective of a fixed placement: rewards of every (t, d) reached by at
/// least S_td placed slots.
double score_placement(const MclpInstance& instance, std::span<const std::size_t> placement);

/// MCLP data from propagated slot and debris states. `thresholds` is per
/// debris (empty means 1 everywhere).
MclpInstance build_mclp(const EngagementContext& ctx, std::span<const ablation::DebrisBody> debris,
                        const astro::StateTable& slot_states, const astro::StateTable& debris_states,
                        std::size_t platforms, std::span<const double> thresholds = {},
                        bool use_wprime = true, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Per-step engagement scheduling subproblem.

struct EspDebris {
  std::size_t index = 0;                     // caller's debris index
  std::vector<ScoredCandidate> candidates;   // relocations only; engagers are platform ids
};

struct EspSubproblem {
  std::size_t step = 0;
  std::size_t platforms = 0;
  std::vector<EspDebris> debris;

  std::size_t candidate_count() const;
};

struct EspModel {
  milp::MilpModel model;
  std::vector<std::vector<std::size_t>> x;  // [debris position][candidate]
};

EspModel build_esp_model(const EspSubproblem& sub);

struct EspChoice {
  std::size_t debris_pos = 0;
  std::size_t candidate = 0;
};

std::vector<EspChoice> decode_esp(const EspSubproblem& sub, const EspModel& model,
                                  const milp::MilpSolution& solution);

/// Highest reward first, skipping candidates that reuse a platform or debris.
std::vector<EspChoice> greedy_esp(const EspSubproblem& sub);

double esp_value(const EspSubproblem& sub, std::span<const EspChoice> choices);

/// Builds the step-t subproblem from placed platform states and the current
/// debris states. `active[d] == false` removes debris d.
EspSubproblem build_esp_subproblem(const EngagementContext& ctx, std::size_t step,
                                   std::span<const astro::StateVector> platform_states,
                                   std::span<const ablation::DebrisBody> debris,
                                   std::span<const astro::StateVector> debris_states,
                                   const std::vector<bool>& active);

}  // namespace lasercon::formulations
