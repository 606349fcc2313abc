#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lasercon/ablation.hpp"
#include "lasercon/access.hpp"
#include "lasercon/astro.hpp"

namespace lasercon::reward {

struct Window {
  std::size_t t_min = 0;
  std::size_t t_max = 0;

  bool contains(std::size_t t) const { return t >= t_min && t <= t_max; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct RewardConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double g0 = 1e4;
  double g = 1e6;
  double g_h = 1e6;
  double h_star = 6478.137;  // km, periapsis radius (R_earth + 100 km)
  std::size_t tau_lookahead = 0;
  // Unset means each conjunction debris uses [0, t_c].
  std::optional<Window> window;
  // 0 means "not set yet"; callers fill it from the debris field.
  double m_max = 0.0;

  void validate() const;
};

struct ValuableAsset {
  std::string id;
  astro::OrbitElements elements;
  double sphere_radius = 10.0;  // km
};

struct ConjunctionReport {
  std::string debris_id;
  std::string asset_id;
  std::size_t tca_step = 0;    // step of minimum sampled distance
  double miss_distance = 0.0;  // km
  bool conjunction = false;
  std::optional<std::size_t> first_conjunction_step;
  Window window_used;
};

/// Largest effective mass in a debris field.
double max_effective_mass(std::span<const ablation::DebrisBody> debris);

/// Grid-sampled closest approach for every (debris, asset) pair, assuming no
/// engagements. Pairs are reported debris-major in input order.
std::vector<ConjunctionReport> screen_conjunctions(std::span<const ablation::DebrisBody> debris,
                                                   std::span<const ValuableAsset> assets,
                                                   const astro::TimeGrid& grid,
                                                   const RewardConfig& cfg = {},
                                                   const astro::AstroConstants& k = {});

/// Earliest conjunction step of a debris over all assets, if any.
std::optional<std::size_t> first_conjunction(const std::string& debris_id,
                                             std::span<const ConjunctionReport> reports);

/// Throws WindowAfterTca when a configured window closes after t_c.
double c0_term(std::optional<std::size_t> t_c, std::size_t t, const RewardConfig& cfg);
double c0_term(const std::string& debris_id, std::size_t t,
               std::span<const ConjunctionReport> reports, const RewardConfig& cfg);

/// Two-body propagation of the post-engagement state over steps
/// t+1 .. t+1+tau (clipped to the grid); -G on any sphere intrusion.
double lookahead_penalty(const access::CandidateSlot& candidate,
                         std::span<const ValuableAsset> assets, const RewardConfig& cfg,
                         const astro::TimeGrid& grid, const astro::AstroConstants& k = {});

double delta_h_term(double h_before, double h_after, const RewardConfig& cfg);

double mass_term(const ablation::DebrisBody& debris, bool engaged, const RewardConfig& cfg);

/// Weighted reward components of one candidate slot.
struct RewardTerms {
  double c0 = 0.0;
  double c = 0.0;
  double dh = 0.0;  // alpha * delta_h
  double m = 0.0;   // beta * M
  double total() const { return c0 + c + dh + m; }
};

/// Reward evaluation bound to one scenario. Asset states are sampled once.
class RewardContext {
 public:
  RewardContext(RewardConfig cfg, std::vector<ValuableAsset> assets, astro::TimeGrid grid,
                std::span<const ConjunctionReport> reports, astro::AstroConstants k = {});

  const RewardConfig& config() const { return cfg_; }
  const astro::TimeGrid& grid() const { return grid_; }
  std::span<const ValuableAsset> assets() const { return assets_; }
  std::optional<std::size_t> first_conjunction(const std::string& debris_id) const;

  double c0(const std::string& debris_id, std::size_t t) const;
  double lookahead(const access::CandidateSlot& candidate) const;
  /// All zero for the no-engagement slot.
  RewardTerms terms(const access::CandidateSlot& candidate, const ablation::DebrisBody& debris,
                    double h_before) const;
  /// C0 + C + alpha*dh + beta*M; 0 for the no-engagement slot.
  double full(const access::CandidateSlot& candidate, const ablation::DebrisBody& debris,
              double h_before) const;
  double mclp(const ablation::DebrisBody& debris, std::size_t t) const;

 private:
  RewardConfig cfg_;
  std::vector<ValuableAsset> assets_;
  astro::TimeGrid grid_;
  astro::AstroConstants k_;
  std::unordered_map<std::string, std::size_t> t_c_;
  astro::StateTable asset_states_;
};

double full_reward(const access::CandidateSlot& candidate, const ablation::DebrisBody& debris,
                   double h_before, const RewardContext& ctx);

double mclp_reward(const ablation::DebrisBody& debris, std::size_t t, const RewardContext& ctx);

}  // namespace lasercon::reward
