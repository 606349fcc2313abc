#include "lasercon/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lasercon/error.hpp"

namespace lasercon::reward {

void RewardConfig::validate() const {
  if (!(g0 > 0.0) || !(g > 0.0) || !(g_h > 0.0)) {
    throw Error(ErrorKind::ValidationError, "reward penalties g0, g, g_h must be positive");
  }
  if (!(h_star > 0.0)) {
    throw Error(ErrorKind::ValidationError, "h_star must be a positive radius");
  }
  if (window && window->t_min > window->t_max) {
    throw Error(ErrorKind::ValidationError, "reward window requires t_min <= t_max");
  }
  if (m_max < 0.0) {
    throw Error(ErrorKind::ValidationError, "m_max must be positive");
  }
}

double max_effective_mass(std::span<const ablation::DebrisBody> debris) {
  double m = 0.0;
  for (const auto& d : debris) m = std::max(m, d.effective_mass());
  return m;
}

namespace {

Window window_for(std::optional<std::size_t> t_c, const RewardConfig& cfg) {
  if (cfg.window) return *cfg.window;
  return Window{0, t_c.value_or(0)};
}

}  // namespace

std::vector<ConjunctionReport> screen_conjunctions(std::span<const ablation::DebrisBody> debris,
                                                   std::span<const ValuableAsset> assets,
                                                   const astro::TimeGrid& grid,
                                                   const RewardConfig& cfg,
                                                   const astro::AstroConstants& k) {
  std::vector<ConjunctionReport> out;
  if (assets.empty()) return out;

  std::vector<astro::OrbitElements> asset_elements;
  for (const auto& a : assets) {
    if (!(a.sphere_radius > 0.0)) {
      throw Error(ErrorKind::ValidationError, "asset '" + a.id + "' sphere radius must be positive");
    }
    asset_elements.push_back(a.elements);
  }
  const auto asset_states = astro::StateTable::propagate(asset_elements, grid, k);

  for (const auto& d : debris) {
    const astro::Track track{d.elements, 0};
    std::vector<ConjunctionReport> rows(assets.size());
    for (std::size_t a = 0; a < assets.size(); ++a) {
      rows[a].debris_id = d.id;
      rows[a].asset_id = assets[a].id;
      rows[a].miss_distance = std::numeric_limits<double>::infinity();
    }
    for (std::size_t t = 0; t < grid.steps; ++t) {
      const auto ds = track.state_at(t, grid, k);
      for (std::size_t a = 0; a < assets.size(); ++a) {
        const double dist = norm(ds.r - asset_states.at(a, t).r);
        auto& row = rows[a];
        if (dist < row.miss_distance) {
          row.miss_distance = dist;
          row.tca_step = t;
        }
        if (dist < assets[a].sphere_radius && !row.first_conjunction_step) {
          row.first_conjunction_step = t;
          row.conjunction = true;
        }
      }
    }
    std::optional<std::size_t> t_c;
    for (const auto& row : rows) {
      if (row.first_conjunction_step && (!t_c || *row.first_conjunction_step < *t_c)) {
        t_c = row.first_conjunction_step;
      }
    }
    for (auto& row : rows) {
      row.window_used = window_for(t_c, cfg);
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::optional<std::size_t> first_conjunction(const std::string& debris_id,
                                             std::span<const ConjunctionReport> reports) {
  std::optional<std::size_t> t_c;
  for (const auto& r : reports) {
    if (r.debris_id != debris_id || !r.first_conjunction_step) continue;
    if (!t_c || *r.first_conjunction_step < *t_c) t_c = r.first_conjunction_step;
  }
  return t_c;
}

double c0_term(std::optional<std::size_t> t_c, std::size_t t, const RewardConfig& cfg) {
  if (!t_c) return 0.0;
  if (cfg.window && cfg.window->t_max > *t_c) {
    throw Error(ErrorKind::WindowAfterTca,
                "reward window closes at step " + std::to_string(cfg.window->t_max) +
                    ", after the conjunction at step " + std::to_string(*t_c));
  }
  return window_for(t_c, cfg).contains(t) ? cfg.g0 : 0.0;
}

double c0_term(const std::string& debris_id, std::size_t t,
               std::span<const ConjunctionReport> reports, const RewardConfig& cfg) {
  return c0_term(first_conjunction(debris_id, reports), t, cfg);
}

namespace {

// AssetAt(a, step) -> StateVector
template <typename AssetAt>
double lookahead_impl(const access::CandidateSlot& candidate,
                      std::span<const ValuableAsset> assets, const RewardConfig& cfg,
                      const astro::TimeGrid& grid, const astro::AstroConstants& k,
                      AssetAt&& asset_at) {
  if (assets.empty() || candidate.hyperbolic) return 0.0;
  const std::size_t t = candidate.resulting_state.epoch_step;
  const std::size_t first = t + 1;
  if (first >= grid.steps) return 0.0;
  const std::size_t last = std::min(first + cfg.tau_lookahead, grid.steps - 1);

  astro::OrbitElements el = astro::state_to_elements(candidate.resulting_state, k);
  astro::AstroConstants kepler = k;
  kepler.j2 = 0.0;
  for (std::size_t step = first; step <= last; ++step) {
    const auto now = astro::propagate_j2_seconds(el, grid.seconds_between(t, step), kepler);
    const auto ds = astro::elements_to_state(now, kepler, step);
    for (std::size_t a = 0; a < assets.size(); ++a) {
      if (norm(ds.r - asset_at(a, step).r) < assets[a].sphere_radius) return -cfg.g;
    }
  }
  return 0.0;
}

}  // namespace

double lookahead_penalty(const access::CandidateSlot& candidate,
                         std::span<const ValuableAsset> assets, const RewardConfig& cfg,
                         const astro::TimeGrid& grid, const astro::AstroConstants& k) {
  return lookahead_impl(candidate, assets, cfg, grid, k, [&](std::size_t a, std::size_t step) {
    return astro::Track{assets[a].elements, 0}.state_at(step, grid, k);
  });
}

double delta_h_term(double h_before, double h_after, const RewardConfig& cfg) {
  if (!(h_before > 0.0) || !(h_after > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "periapsis radii must be positive");
  }
  const double gamma = h_after > h_before ? -cfg.g_h : 1.0;
  const double ratio = cfg.h_star / h_after;
  return std::min(gamma * ratio * ratio * ratio, 1.0);
}

double mass_term(const ablation::DebrisBody& debris, bool engaged, const RewardConfig& cfg) {
  if (!engaged) return 0.0;
  if (!(cfg.m_max > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "m_max must be set before evaluating the mass term");
  }
  return debris.effective_mass() / cfg.m_max;
}

RewardContext::RewardContext(RewardConfig cfg, std::vector<ValuableAsset> assets,
                             astro::TimeGrid grid, std::span<const ConjunctionReport> reports,
                             astro::AstroConstants k)
    : cfg_(std::move(cfg)), assets_(std::move(assets)), grid_(std::move(grid)), k_(k) {
  cfg_.validate();
  for (const auto& r : reports) {
    if (!r.first_conjunction_step) continue;
    auto [it, inserted] = t_c_.emplace(r.debris_id, *r.first_conjunction_step);
    if (!inserted) it->second = std::min(it->second, *r.first_conjunction_step);
  }
  if (cfg_.window) {
    for (const auto& [id, t_c] : t_c_) {
      if (cfg_.window->t_max > t_c) {
        throw Error(ErrorKind::WindowAfterTca,
                    "reward window closes at step " + std::to_string(cfg_.window->t_max) +
                        ", after debris '" + id + "' conjunction at step " + std::to_string(t_c));
      }
    }
  }
  std::vector<astro::OrbitElements> elements;
  for (const auto& a : assets_) elements.push_back(a.elements);
  if (!elements.empty()) asset_states_ = astro::StateTable::propagate(elements, grid_, k_);
}

std::optional<std::size_t> RewardContext::first_conjunction(const std::string& debris_id) const {
  const auto it = t_c_.find(debris_id);
  if (it == t_c_.end()) return std::nullopt;
  return it->second;
}

double RewardContext::c0(const std::string& debris_id, std::size_t t) const {
  return c0_term(first_conjunction(debris_id), t, cfg_);
}

double RewardContext::lookahead(const access::CandidateSlot& candidate) const {
  return lookahead_impl(candidate, assets_, cfg_, grid_, k_, [&](std::size_t a, std::size_t step) {
    return asset_states_.at(a, step);
  });
}

RewardTerms RewardContext::terms(const access::CandidateSlot& candidate,
                                 const ablation::DebrisBody& debris, double h_before) const {
  RewardTerms out;
  if (!candidate.is_relocation()) return out;
  out.c0 = c0(debris.id, candidate.step);
  out.c = lookahead(candidate);
  out.dh = cfg_.alpha * delta_h_term(h_before, candidate.resulting_periapsis, cfg_);
  out.m = cfg_.beta * mass_term(debris, true, cfg_);
  return out;
}

double RewardContext::full(const access::CandidateSlot& candidate,
                           const ablation::DebrisBody& debris, double h_before) const {
  return terms(candidate, debris, h_before).total();
}

double RewardContext::mclp(const ablation::DebrisBody& debris, std::size_t t) const {
  return c0(debris.id, t) + mass_term(debris, true, cfg_);
}

double full_reward(const access::CandidateSlot& candidate, const ablation::DebrisBody& debris,
                   double h_before, const RewardContext& ctx) {
  return ctx.full(candidate, debris, h_before);
}

double mclp_reward(const ablation::DebrisBody& debris, std::size_t t, const RewardContext& ctx) {
  return ctx.mclp(debris, t);
}

}  // namespace lasercon::reward
