#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lasercon/formulations.hpp"
#include "lasercon/milp.hpp"

namespace lasercon::scheduler {

enum class SolverChoice { Exact, Heuristic };

struct SchedulerOptions {
  SolverChoice solver = SolverChoice::Exact;
  // Above this many candidate slots in one step the greedy path is used.
  std::size_t esp_exact_max_candidates = 5000;
  milp::Limits limits;
};

struct DebrisRecord {
  ablation::DebrisBody body;
  // Orbit segments; segment k applies from its epoch_step until the next one.
  std::vector<astro::Track> segments;
  double periapsis_epoch = 0.0;  // km
  double periapsis_now = 0.0;    // km
  std::size_t engaged_count = 0;
  std::optional<std::size_t> deorbited_at;
  bool ejected = false;

  astro::StateVector state_at(std::size_t step, const astro::TimeGrid& grid,
                              const astro::AstroConstants& k = {}) const;
};

struct EngagementEvent {
  std::size_t step = 0;
  std::string debris_id;
  std::vector<std::size_t> engagers;  // platform indices
  Vec3 dv;                            // m/s
  double h_before = 0.0;              // km
  double h_after = 0.0;               // km
  reward::RewardTerms terms;
  double reward = 0.0;
};

struct StepNote {
  std::size_t step = 0;
  std::string message;
};

struct MissionState {
  std::size_t step = 0;
  std::vector<astro::OrbitElements> platforms;
  std::vector<DebrisRecord> debris;
  double value = 0.0;
  std::vector<double> step_values;  // V(t)
  std::vector<EngagementEvent> events;
  std::vector<StepNote> notes;
};

/// Myopic policy: one subproblem per step over steps 0..T-2, each seeded by
/// the outcome of the previous one.
MissionState run_mission(const formulations::EngagementContext& ctx,
                         std::span<const ablation::DebrisBody> debris,
                         std::span<const astro::OrbitElements> platforms,
                         const SchedulerOptions& options = {});

struct TimelineRow {
  std::size_t step = 0;
  std::size_t cum_engagements = 0;
  std::size_t cum_deorbits = 0;
};

struct Metrics {
  double value = 0.0;
  std::size_t engagements = 0;  // events
  std::size_t engaged = 0;      // distinct debris
  std::size_t deorbited = 0;
  std::size_t ejected = 0;
  double nudging_km = 0.0;
  std::vector<TimelineRow> timeline;
};

Metrics derive_metrics(const MissionState& state, std::size_t steps);

}  // namespace lasercon::scheduler
