#include "lasercon/scheduler.hpp"

#include <algorithm>

#include "lasercon/error.hpp"

namespace lasercon::scheduler {

astro::StateVector DebrisRecord::state_at(std::size_t step, const astro::TimeGrid& grid,
                                          const astro::AstroConstants& k) const {
  const astro::Track* current = &segments.front();
  for (const auto& seg : segments) {
    if (seg.epoch_step <= step) current = &seg;
  }
  return current->state_at(step, grid, k);
}

namespace {

std::vector<formulations::EspChoice> solve_step(const formulations::EspSubproblem& sub,
                                                const SchedulerOptions& options,
                                                std::vector<StepNote>& notes) {
  const std::size_t n = sub.candidate_count();
  if (n == 0) return {};
  if (options.solver == SolverChoice::Heuristic) return formulations::greedy_esp(sub);
  if (n > options.esp_exact_max_candidates) {
    notes.push_back({sub.step, "greedy subproblem: " + std::to_string(n) + " candidate slots exceed the exact limit"});
    return formulations::greedy_esp(sub);
  }
  const auto model = formulations::build_esp_model(sub);
  try {
    return formulations::decode_esp(sub, model, milp::solve_exact(model.model, options.limits));
  } catch (const milp::LimitsExceeded& e) {
    notes.push_back({sub.step, std::string("solver limits reached: ") + e.what()});
    if (!e.incumbent().assignment.empty()) return formulations::decode_esp(sub, model, e.incumbent());
    return formulations::greedy_esp(sub);
  }
}

}  // namespace

MissionState run_mission(const formulations::EngagementContext& ctx,
                         std::span<const ablation::DebrisBody> debris,
                         std::span<const astro::OrbitElements> platforms,
                         const SchedulerOptions& options) {
  ctx.grid.validate();
  const std::size_t T = ctx.grid.steps;
  MissionState state;
  state.platforms.assign(platforms.begin(), platforms.end());
  for (const auto& body : debris) {
    DebrisRecord rec;
    rec.body = body;
    rec.segments.push_back({body.elements, 0});
    rec.periapsis_epoch = body.elements.periapsis_radius();
    rec.periapsis_now = rec.periapsis_epoch;
    state.debris.push_back(std::move(rec));
  }
  const double h_star = ctx.rewards ? ctx.rewards->config().h_star : reward::RewardConfig{}.h_star;

  for (std::size_t t = 0; t + 1 < T; ++t) {
    state.step = t;
    std::vector<astro::StateVector> platform_states;
    for (const auto& el : state.platforms) {
      platform_states.push_back(astro::Track{el, 0}.state_at(t, ctx.grid, ctx.k));
    }
    std::vector<bool> active(state.debris.size());
    std::vector<astro::StateVector> debris_states(state.debris.size());
    for (std::size_t d = 0; d < state.debris.size(); ++d) {
      active[d] = !state.debris[d].deorbited_at.has_value();
      if (active[d]) debris_states[d] = state.debris[d].state_at(t, ctx.grid, ctx.k);
    }
    const auto sub =
        formulations::build_esp_subproblem(ctx, t, platform_states, debris, debris_states, active);
    const auto choices = solve_step(sub, options, state.notes);

    double step_value = 0.0;
    for (const auto& choice : choices) {
      const auto& cand = sub.debris[choice.debris_pos].candidates[choice.candidate];
      auto& rec = state.debris[sub.debris[choice.debris_pos].index];

      EngagementEvent ev;
      ev.step = t;
      ev.debris_id = rec.body.id;
      ev.engagers = cand.slot.engager_set;
      ev.dv = cand.slot.dv.vec();
      ev.h_before = cand.h_before;
      ev.h_after = cand.slot.resulting_periapsis;
      ev.terms = cand.terms;
      ev.reward = cand.reward;
      state.events.push_back(ev);
      step_value += cand.reward;

      ++rec.engaged_count;
      rec.periapsis_now = cand.slot.resulting_periapsis;
      if (auto next = formulations::track_after(cand.slot, ctx.k)) {
        rec.segments.push_back(*next);
      } else {
        rec.ejected = true;
        rec.deorbited_at = t;
      }
      if (rec.periapsis_now <= h_star) rec.deorbited_at = t;
    }
    state.step_values.push_back(step_value);
    state.value += step_value;
  }
  state.step = T - 1;
  return state;
}

Metrics derive_metrics(const MissionState& state, std::size_t steps) {
  Metrics m;
  m.value = state.value;
  m.engagements = state.events.size();
  for (const auto& rec : state.debris) {
    if (rec.engaged_count > 0) ++m.engaged;
    if (rec.deorbited_at) ++m.deorbited;
    if (rec.ejected) ++m.ejected;
    if (rec.engaged_count > 0 && !rec.deorbited_at) m.nudging_km += rec.periapsis_epoch - rec.periapsis_now;
  }
  std::size_t ev = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    while (ev < state.events.size() && state.events[ev].step <= t) ++ev;
    TimelineRow row;
    row.step = t;
    row.cum_engagements = ev;
    for (const auto& rec : state.debris) {
      if (rec.deorbited_at && *rec.deorbited_at <= t) ++row.cum_deorbits;
    }
    m.timeline.push_back(row);
  }
  return m;
}

}  // namespace lasercon::scheduler
