#include "lasercon/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lasercon/error.hpp"

namespace lasercon::formulations {

using milp::Sense;
using milp::Term;

namespace {

std::string join_name(std::initializer_list<std::size_t> parts, const char* prefix) {
  std::string out = prefix;
  for (std::size_t p : parts) out += "_" + std::to_string(p);
  return out;
}

}  // namespace

std::vector<access::Engager> feasible_engagers(const EngagementContext& ctx,
                                               const ablation::DebrisBody& body,
                                               const astro::StateVector& debris_state,
                                               std::span<const access::Engager> engagers) {
  std::vector<access::Engager> out;
  double h_before = 0.0;
  if (ctx.wprime_gate) h_before = astro::periapsis_radius(debris_state, ctx.k);
  for (const auto& e : engagers) {
    if (!access::engagement_feasible(e.state, debris_state, ctx.access, ctx.k)) continue;
    if (ctx.wprime_gate &&
        access::solo_periapsis_after(ctx.laser, body, e.state, debris_state, ctx.k) > h_before) {
      continue;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<ScoredCandidate> score_candidates(const EngagementContext& ctx,
                                              const ablation::DebrisBody& body,
                                              const astro::StateVector& debris_state,
                                              std::span<const access::Engager> engagers) {
  if (ctx.rewards == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "engagement context has no reward context");
  }
  const double h_before = astro::periapsis_radius(debris_state, ctx.k);
  auto slots = access::enumerate_candidate_slots(body, debris_state, engagers, ctx.engager_cap,
                                                 ctx.laser, ctx.k);
  std::vector<ScoredCandidate> out;
  out.reserve(slots.size());
  for (auto& slot : slots) {
    ScoredCandidate c;
    c.terms = ctx.rewards->terms(slot, body, h_before);
    c.reward = c.terms.total();
    c.h_before = h_before;
    c.slot = std::move(slot);
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<astro::Track> track_after(const access::CandidateSlot& slot,
                                        const astro::AstroConstants& k) {
  if (slot.hyperbolic) return std::nullopt;
  try {
    return astro::Track{astro::state_to_elements(slot.resulting_state, k), slot.step};
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HyperbolicState || e.kind() == ErrorKind::RectilinearState) {
      return std::nullopt;
    }
    throw;
  }
}

// ---------------------------------------------------------------------------

void ClspInstance::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, "CLSP instance: " + msg); };
  if (steps < 2) fail("needs at least two steps");
  if (layers.size() != steps) fail("layer count differs from step count");
  if (w.steps() != steps || w.slots() != slots || w.debris() != debris) fail("W dimensions mismatch");
  for (std::size_t t = 0; t < steps; ++t) {
    if (layers[t].size() != debris) fail("layer " + std::to_string(t) + " debris count mismatch");
    for (std::size_t d = 0; d < debris; ++d) {
      const auto& layer = layers[t][d];
      if (t == 0 && layer.size() != 1) fail("each debris starts from exactly one slot");
      if (layer.empty()) fail("empty layer");
      for (const auto& node : layer) {
        if (t > 0 && node.parent >= layers[t - 1][d].size()) fail("dangling parent");
        if (t == 0 && node.parent != kNone) fail("initial slot cannot have a parent");
        for (std::size_t s : node.engagers) {
          if (s >= slots) fail("engager slot out of range");
        }
        if (!std::isfinite(node.reward)) fail("non-finite reward");
      }
    }
  }
  if (platforms > slots) fail("more platforms than slots");
}

std::size_t ClspInstance::tree_size() const {
  std::size_t n = 0;
  for (const auto& layer : layers) {
    for (const auto& nodes : layer) n += nodes.size();
  }
  return n;
}

ClspModel build_clsp_model(const ClspInstance& inst, ClspEncoding encoding) {
  inst.validate();
  const std::size_t T = inst.steps, S = inst.slots, D = inst.debris;
  const bool dense = encoding == ClspEncoding::Dense;
  ClspModel out;
  auto& m = out.model;
  m.name = "clsp";
  m.metadata["formulation"] = "clsp";
  m.metadata["encoding"] = dense ? "dense" : "sparse";

  double penalty = 1.0;
  for (const auto& layer : inst.layers) {
    for (const auto& nodes : layer) {
      for (const auto& node : nodes) penalty += std::abs(node.reward);
    }
  }

  for (std::size_t s = 0; s < S; ++s) out.z.push_back(m.add_variable(join_name({s}, "z")));
  out.y.assign(T * S * D, kNone);
  auto yi = [&](std::size_t t, std::size_t s, std::size_t d) { return (t * S + s) * D + d; };
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t d = 0; d < D; ++d) {
        if (dense || inst.w.get(t, s, d)) out.y[yi(t, s, d)] = m.add_variable(join_name({t, s, d}, "y"));
      }
    }
  }

  // outgoing[t][d][i] / incoming[t+1][d][j]: (other end, var)
  using Adj = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;
  std::vector<std::vector<Adj>> outgoing(T), incoming(T);
  for (std::size_t t = 0; t < T; ++t) {
    outgoing[t].resize(D);
    incoming[t].resize(D);
    for (std::size_t d = 0; d < D; ++d) {
      outgoing[t][d].resize(inst.layers[t][d].size());
      incoming[t][d].resize(inst.layers[t][d].size());
    }
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) {
      const auto& from = inst.layers[t][d];
      const auto& to = inst.layers[t + 1][d];
      for (std::size_t i = 0; i < from.size(); ++i) {
        for (std::size_t j = 0; j < to.size(); ++j) {
          const bool edge = to[j].parent == i;
          if (!dense && !edge) continue;
          const double r = edge ? to[j].reward : -penalty;
          const std::size_t var = m.add_variable(join_name({t, d, i, j}, "x"), r);
          out.x.push_back({t, d, i, j, var});
          outgoing[t][d][i].emplace_back(j, var);
          incoming[t + 1][d][j].emplace_back(i, var);
        }
      }
    }
  }

  // Engagement feasibility coupling.
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t d = 0; d < D; ++d) {
        const std::size_t y = out.y[yi(t, s, d)];
        if (y == kNone) continue;
        std::vector<Term> terms{{y, -1.0}};
        if (inst.w.get(t, s, d)) terms.push_back({out.z[s], 1.0});
        m.add_constraint(join_name({t, s, d}, "couple"), std::move(terms), Sense::GreaterEqual, 0.0);
      }
    }
  }
  // One debris per platform per step.
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      std::vector<Term> terms;
      for (std::size_t d = 0; d < D; ++d) {
        if (out.y[yi(t, s, d)] != kNone) terms.push_back({out.y[yi(t, s, d)], 1.0});
      }
      if (!dense && terms.empty()) continue;
      m.add_constraint(join_name({t, s}, "limit"), std::move(terms), Sense::LessEqual, 1.0);
    }
  }
  // Every debris leaves its initial slot.
  for (std::size_t d = 0; d < D; ++d) {
    std::vector<Term> terms;
    for (const auto& [j, var] : outgoing[0][d][0]) terms.push_back({var, 1.0});
    m.add_constraint(join_name({d}, "source"), std::move(terms), Sense::Equal, 1.0);
  }
  // Flow balance through intermediate layers.
  for (std::size_t t = 1; t + 1 < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) {
      for (std::size_t i = 0; i < inst.layers[t][d].size(); ++i) {
        std::vector<Term> terms;
        for (const auto& [j, var] : outgoing[t][d][i]) terms.push_back({var, 1.0});
        for (const auto& [u, var] : incoming[t][d][i]) terms.push_back({var, -1.0});
        m.add_constraint(join_name({t, d, i}, "flow"), std::move(terms), Sense::Equal, 0.0);
      }
    }
  }
  // A new orbit needs its whole engager set.
  for (const auto& xv : out.x) {
    const auto& node = inst.layers[xv.t + 1][xv.d][xv.j];
    if (node.engagers.empty()) continue;
    std::vector<Term> terms{{xv.var, -static_cast<double>(node.engagers.size())}};
    for (std::size_t s : node.engagers) {
      const std::size_t y = out.y[yi(xv.t, s, xv.d)];
      if (y != kNone) terms.push_back({y, 1.0});
    }
    m.add_constraint(join_name({xv.t, xv.d, xv.i, xv.j}, "link"), std::move(terms),
                     Sense::GreaterEqual, 0.0);
  }
  // Constellation size.
  std::vector<Term> card;
  for (std::size_t s = 0; s < S; ++s) card.push_back({out.z[s], 1.0});
  m.add_constraint("card", std::move(card), Sense::Equal, static_cast<double>(inst.platforms));
  return out;
}

ClspSchedule decode_clsp(const ClspInstance& inst, const ClspModel& model,
                         const milp::MilpSolution& solution) {
  if (solution.assignment.size() != model.model.num_variables()) {
    throw Error(ErrorKind::InvalidArgument, "solution does not match the CLSP model");
  }
  const auto& a = solution.assignment;
  ClspSchedule out;
  out.objective = solution.objective_value;
  for (std::size_t s = 0; s < model.z.size(); ++s) {
    if (a[model.z[s]]) out.placement.push_back(s);
  }
  out.paths.assign(inst.debris, std::vector<std::size_t>(inst.steps, kNone));
  for (std::size_t d = 0; d < inst.debris; ++d) out.paths[d][0] = 0;
  // Relocation variables are grouped by t, so one pass follows every path.
  for (const auto& xv : model.x) {
    if (!a[xv.var] || out.paths[xv.d][xv.t] != xv.i) continue;
    out.paths[xv.d][xv.t + 1] = xv.j;
    const auto& node = inst.layers[xv.t + 1][xv.d][xv.j];
    if (!node.engagers.empty()) {
      out.engagements.push_back({xv.t, xv.d, xv.j, node.engagers, node.reward});
    }
  }
  return out;
}

ClspInstance build_clsp(const EngagementContext& ctx, std::span<const ablation::DebrisBody> debris,
                        std::span<const astro::OrbitElements> slot_elements, std::size_t platforms,
                        const ClspCaps& caps) {
  const std::size_t T = ctx.grid.steps, S = slot_elements.size(), D = debris.size();
  const std::size_t cells = T * S * D;
  if (cells > caps.max_cells) {
    throw Error(ErrorKind::InstanceTooLarge,
                "CLSP has T*S*D = " + std::to_string(cells) + " cells, cap " + std::to_string(caps.max_cells));
  }
  const auto slot_states = astro::StateTable::propagate(slot_elements, ctx.grid, ctx.k);

  ClspInstance inst;
  inst.steps = T;
  inst.slots = S;
  inst.debris = D;
  inst.platforms = platforms;
  inst.layers.assign(T, std::vector<std::vector<ClspNode>>(D));
  inst.w = access::FeasibilityTensor(T, S, D);

  std::size_t total = 0;
  for (std::size_t d = 0; d < D; ++d) {
    const auto& body = debris[d];
    std::vector<std::optional<astro::Track>> tracks{astro::Track{body.elements, 0}};
    inst.layers[0][d].push_back({});
    ++total;
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<access::Engager> all;
      all.reserve(S);
      for (std::size_t s = 0; s < S; ++s) all.push_back({s, slot_states.at(s, t)});

      std::vector<std::optional<astro::Track>> next;
      for (std::size_t i = 0; i < inst.layers[t][d].size(); ++i) {
        const auto& track = tracks[i];
        if (!track) {
          if (t + 1 < T) {
            inst.layers[t + 1][d].push_back({i, {}, 0.0});
            next.push_back(std::nullopt);
          }
          continue;
        }
        const auto state = track->state_at(t, ctx.grid, ctx.k);
        const auto feas = feasible_engagers(ctx, body, state, all);
        for (const auto& e : feas) inst.w.set(t, e.id, d, true);
        if (t + 1 == T) continue;
        const auto cands = score_candidates(ctx, body, state, feas);
        for (const auto& c : cands) {
          inst.layers[t + 1][d].push_back({i, c.slot.engager_set, c.reward});
          next.push_back(c.slot.is_relocation() ? track_after(c.slot, ctx.k) : track);
        }
        total += cands.size();
        if (total > caps.max_tree_slots) {
          throw Error(ErrorKind::InstanceTooLarge, "CLSP candidate tree exceeds " +
                                                       std::to_string(caps.max_tree_slots) +
                                                       " slots (reached " + std::to_string(total) + ")");
        }
      }
      tracks = std::move(next);
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------

void MclpInstance::validate() const {
  const std::size_t cells = steps * debris;
  if (reward.size() != cells || threshold.size() != cells) {
    throw Error(ErrorKind::InvalidArgument, "MCLP reward/threshold size must be T*D");
  }
  if (gate.steps() != steps || gate.slots() != slots || gate.debris() != debris) {
    throw Error(ErrorKind::InvalidArgument, "MCLP gate dimensions mismatch");
  }
  if (platforms > slots) throw Error(ErrorKind::InvalidArgument, "more platforms than slots");
  for (double s : threshold) {
    if (!(s >= 1.0) || s != std::floor(s)) {
      throw Error(ErrorKind::InvalidArgument, "S_td must be a positive integer");
    }
  }
}

MclpModel build_mclp_model(const MclpInstance& inst) {
  inst.validate();
  const std::size_t S = inst.slots, T = inst.steps, D = inst.debris;
  MclpModel out;
  auto& m = out.model;
  m.name = "mclp";
  m.metadata["formulation"] = "mclp";
  for (std::size_t s = 0; s < S; ++s) out.z.push_back(m.add_variable(join_name({s}, "z")));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) {
      out.x.push_back(m.add_variable(join_name({t, d}, "x"), inst.reward[t * D + d]));
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) {
      std::vector<Term> terms;
      for (std::size_t s = 0; s < S; ++s) {
        if (inst.gate.get(t, s, d)) terms.push_back({out.z[s], 1.0});
      }
      terms.push_back({out.x[t * D + d], -inst.threshold[t * D + d]});
      m.add_constraint(join_name({t, d}, "cover"), std::move(terms), Sense::GreaterEqual, 0.0);
    }
  }
  std::vector<Term> card;
  for (std::size_t s = 0; s < S; ++s) card.push_back({out.z[s], 1.0});
  m.add_constraint("card", std::move(card), Sense::Equal, static_cast<double>(inst.platforms));
  return out;
}

double score_placement(const MclpInstance& inst, std::span<const std::size_t> placement) {
  inst.validate();
  double total = 0.0;
  for (std::size_t t = 0; t < inst.steps; ++t) {
    for (std::size_t d = 0; d < inst.debris; ++d) {
      double hits = 0.0;
      for (std::size_t s : placement) hits += inst.gate.get(t, s, d) ? 1.0 : 0.0;
      if (hits >= inst.threshold[t * inst.debris + d]) total += inst.reward[t * inst.debris + d];
    }
  }
  return total;
}

MclpInstance build_mclp(const EngagementContext& ctx, std::span<const ablation::DebrisBody> debris,
                        const astro::StateTable& slot_states, const astro::StateTable& debris_states,
                        std::size_t platforms, std::span<const double> thresholds, bool use_wprime,
                        unsigned threads) {
  if (ctx.rewards == nullptr) {
    throw Error(ErrorKind::InvalidArgument, "engagement context has no reward context");
  }
  if (!thresholds.empty() && thresholds.size() != debris.size()) {
    throw Error(ErrorKind::InvalidArgument, "one S_td threshold per debris expected");
  }
  MclpInstance inst;
  inst.slots = slot_states.objects();
  inst.steps = slot_states.steps();
  inst.debris = debris.size();
  inst.platforms = platforms;
  auto w = access::build_w(slot_states, debris_states, ctx.access, ctx.k, threads);
  inst.gate = use_wprime ? access::build_w_prime(w, slot_states, debris_states, debris, ctx.laser, ctx.k, threads)
                         : std::move(w);
  inst.reward.resize(inst.steps * inst.debris);
  inst.threshold.assign(inst.steps * inst.debris, 1.0);
  for (std::size_t t = 0; t < inst.steps; ++t) {
    for (std::size_t d = 0; d < inst.debris; ++d) {
      inst.reward[t * inst.debris + d] = ctx.rewards->mclp(debris[d], t);
      if (!thresholds.empty()) inst.threshold[t * inst.debris + d] = thresholds[d];
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------

std::size_t EspSubproblem::candidate_count() const {
  std::size_t n = 0;
  for (const auto& d : debris) n += d.candidates.size();
  return n;
}

EspModel build_esp_model(const EspSubproblem& sub) {
  EspModel out;
  auto& m = out.model;
  m.name = "esp_" + std::to_string(sub.step);
  m.metadata["formulation"] = "esp";
  m.metadata["step"] = std::to_string(sub.step);

  // y[p][k] on demand.
  std::vector<std::vector<std::size_t>> y(sub.platforms, std::vector<std::size_t>(sub.debris.size(), kNone));
  for (std::size_t k = 0; k < sub.debris.size(); ++k) {
    for (const auto& c : sub.debris[k].candidates) {
      for (std::size_t p : c.slot.engager_set) {
        if (p >= sub.platforms) throw Error(ErrorKind::InvalidArgument, "engager id out of range");
        if (y[p][k] == kNone) y[p][k] = m.add_variable(join_name({p, sub.debris[k].index}, "y"));
      }
    }
  }
  out.x.resize(sub.debris.size());
  for (std::size_t k = 0; k < sub.debris.size(); ++k) {
    for (std::size_t j = 0; j < sub.debris[k].candidates.size(); ++j) {
      out.x[k].push_back(
          m.add_variable(join_name({sub.debris[k].index, j}, "x"), sub.debris[k].candidates[j].reward));
    }
  }
  for (std::size_t p = 0; p < sub.platforms; ++p) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < sub.debris.size(); ++k) {
      if (y[p][k] != kNone) terms.push_back({y[p][k], 1.0});
    }
    if (!terms.empty()) m.add_constraint(join_name({p}, "platform"), std::move(terms), Sense::LessEqual, 1.0);
  }
  for (std::size_t k = 0; k < sub.debris.size(); ++k) {
    const auto& cands = sub.debris[k].candidates;
    for (std::size_t j = 0; j < cands.size(); ++j) {
      const auto& set = cands[j].slot.engager_set;
      std::vector<Term> terms{{out.x[k][j], -static_cast<double>(set.size())}};
      for (std::size_t p : set) terms.push_back({y[p][k], 1.0});
      m.add_constraint(join_name({sub.debris[k].index, j}, "engage"), std::move(terms),
                       Sense::GreaterEqual, 0.0);
    }
    std::vector<Term> one;
    for (std::size_t var : out.x[k]) one.push_back({var, 1.0});
    m.add_constraint(join_name({sub.debris[k].index}, "one"), std::move(one), Sense::LessEqual, 1.0);
  }
  return out;
}

std::vector<EspChoice> decode_esp(const EspSubproblem& sub, const EspModel& model,
                                  const milp::MilpSolution& solution) {
  std::vector<EspChoice> out;
  if (solution.assignment.size() != model.model.num_variables()) return out;
  for (std::size_t k = 0; k < sub.debris.size(); ++k) {
    for (std::size_t j = 0; j < model.x[k].size(); ++j) {
      if (solution.assignment[model.x[k][j]]) out.push_back({k, j});
    }
  }
  return out;
}

std::vector<EspChoice> greedy_esp(const EspSubproblem& sub) {
  std::vector<EspChoice> all;
  for (std::size_t k = 0; k < sub.debris.size(); ++k) {
    for (std::size_t j = 0; j < sub.debris[k].candidates.size(); ++j) all.push_back({k, j});
  }
  auto reward = [&](const EspChoice& c) { return sub.debris[c.debris_pos].candidates[c.candidate].reward; };
  std::stable_sort(all.begin(), all.end(),
                   [&](const EspChoice& a, const EspChoice& b) { return reward(a) > reward(b); });
  std::vector<bool> platform_used(sub.platforms, false), debris_used(sub.debris.size(), false);
  std::vector<EspChoice> out;
  for (const auto& c : all) {
    if (reward(c) <= 0.0 || debris_used[c.debris_pos]) continue;
    const auto& set = sub.debris[c.debris_pos].candidates[c.candidate].slot.engager_set;
    if (std::any_of(set.begin(), set.end(), [&](std::size_t p) { return platform_used[p]; })) continue;
    for (std::size_t p : set) platform_used[p] = true;
    debris_used[c.debris_pos] = true;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const EspChoice& a, const EspChoice& b) {
    return a.debris_pos < b.debris_pos;
  });
  return out;
}

double esp_value(const EspSubproblem& sub, std::span<const EspChoice> choices) {
  double v = 0.0;
  for (const auto& c : choices) v += sub.debris[c.debris_pos].candidates[c.candidate].reward;
  return v;
}

EspSubproblem build_esp_subproblem(const EngagementContext& ctx, std::size_t step,
                                   std::span<const astro::StateVector> platform_states,
                                   std::span<const ablation::DebrisBody> debris,
                                   std::span<const astro::StateVector> debris_states,
                                   const std::vector<bool>& active) {
  if (debris.size() != debris_states.size() || active.size() != debris.size()) {
    throw Error(ErrorKind::InvalidArgument, "debris, states and activity flags differ in length");
  }
  EspSubproblem sub;
  sub.step = step;
  sub.platforms = platform_states.size();
  std::vector<access::Engager> engagers;
  for (std::size_t p = 0; p < platform_states.size(); ++p) engagers.push_back({p, platform_states[p]});
  for (std::size_t d = 0; d < debris.size(); ++d) {
    if (!active[d]) continue;
    const auto feas = feasible_engagers(ctx, debris[d], debris_states[d], engagers);
    if (feas.empty()) continue;
    auto cands = score_candidates(ctx, debris[d], debris_states[d], feas);
    EspDebris entry;
    entry.index = d;
    entry.candidates.assign(std::make_move_iterator(cands.begin() + 1), std::make_move_iterator(cands.end()));
    sub.debris.push_back(std::move(entry));
  }
  return sub;
}

}  // namespace lasercon::formulations
