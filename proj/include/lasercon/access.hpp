#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lasercon/ablation.hpp"
#include "lasercon/astro.hpp"

namespace lasercon::access {

struct AccessParams {
  double epsilon = 0.0;  // km, occlusion shell bias above the Earth radius
  double u_min = 175.0;  // km
  double u_max = 325.0;  // km

  static AccessParams from_laser(const ablation::LaserSpec& spec, double epsilon = 0.0) {
    return {epsilon, spec.u_min, spec.u_max};
  }
};

enum class TensorVariant : std::uint8_t { W = 0, WPrime = 1 };

/// Boolean engagement feasibility indexed [t][slot][debris]. Each time slab is
/// padded to whole 64-bit words so slabs can be written independently.
class FeasibilityTensor {
 public:
  FeasibilityTensor() = default;
  FeasibilityTensor(std::size_t steps, std::size_t slots, std::size_t debris,
                    TensorVariant variant = TensorVariant::W);

  std::size_t steps() const { return steps_; }
  std::size_t slots() const { return slots_; }
  std::size_t debris() const { return debris_; }
  TensorVariant variant() const { return variant_; }

  bool get(std::size_t t, std::size_t s, std::size_t d) const {
    const std::size_t bit = index(s, d);
    return (words_[t * words_per_slab_ + bit / 64] >> (bit % 64)) & 1u;
  }
  void set(std::size_t t, std::size_t s, std::size_t d, bool value);

  std::size_t count() const;
  /// True when every set entry of *this is also set in `other`.
  bool subset_of(const FeasibilityTensor& other) const;

  friend bool operator==(const FeasibilityTensor&, const FeasibilityTensor&) = default;

  /// Flat binary cache: magic "LCWT", u32 version, u8 variant, three u64 dims,
  /// then the little-endian payload words.
  void save(const std::filesystem::path& path) const;
  static FeasibilityTensor load(const std::filesystem::path& path);

  static constexpr std::uint32_t kFormatVersion = 1;

 private:
  std::size_t index(std::size_t s, std::size_t d) const { return s * debris_ + d; }

  std::size_t steps_ = 0;
  std::size_t slots_ = 0;
  std::size_t debris_ = 0;
  TensorVariant variant_ = TensorVariant::W;
  std::size_t words_per_slab_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Line-of-sight indicator q; LOS holds iff q > 0. Throws BelowShell when
/// either radius is inside the occlusion shell.
double los_indicator(double r_s, double r_d, double u_sd, const AccessParams& params,
                     const astro::AstroConstants& k = {});

/// LOS and inclusive range gate for one pair of states. An object inside the
/// occlusion shell is never visible.
bool engagement_feasible(const astro::StateVector& platform, const astro::StateVector& debris,
                         const AccessParams& params, const astro::AstroConstants& k = {});

/// W[t,s,d] = LOS && u_min <= u <= u_max. `threads` > 1 splits the time axis.
FeasibilityTensor build_w(const astro::StateTable& platform_states,
                          const astro::StateTable& debris_states, const AccessParams& params,
                          const astro::AstroConstants& k = {}, unsigned threads = 1);

/// Solo-engagement periapsis radius after slot s engages debris d at step t.
double solo_periapsis_after(const ablation::LaserSpec& spec, const ablation::DebrisBody& body,
                            const astro::StateVector& platform, const astro::StateVector& debris,
                            const astro::AstroConstants& k = {});

/// W'[t,s,d] = W && the solo engagement does not raise the periapsis radius.
FeasibilityTensor build_w_prime(const FeasibilityTensor& w, const astro::StateTable& platform_states,
                                const astro::StateTable& debris_states,
                                std::span<const ablation::DebrisBody> bodies,
                                const ablation::LaserSpec& spec, const astro::AstroConstants& k = {},
                                unsigned threads = 1);

inline constexpr std::size_t kUnlimitedCap = std::numeric_limits<std::size_t>::max();

/// Unlimited for small S*D, 3 otherwise.
std::size_t default_engager_cap(std::size_t slots, std::size_t debris);

struct Engager {
  std::size_t id = 0;  // platform or slot id
  astro::StateVector state;
};

struct CandidateSlot {
  std::string debris_id;
  std::size_t step = 0;
  std::vector<std::size_t> engager_set;  // ascending ids; empty for the no-engagement slot
  ablation::DeltaV dv;
  astro::StateVector resulting_state;
  double resulting_periapsis = 0.0;  // km
  bool hyperbolic = false;

  bool is_relocation() const { return !engager_set.empty(); }
};

/// One slot per non-empty engager subset of size <= cap (by size, then
/// lexicographic), preceded by the no-engagement slot.
std::vector<CandidateSlot> enumerate_candidate_slots(const ablation::DebrisBody& debris,
                                                     const astro::StateVector& debris_state,
                                                     std::span<const Engager> feasible_engagers,
                                                     std::size_t cap,
                                                     const ablation::LaserSpec& spec,
                                                     const astro::AstroConstants& k = {});

}  // namespace lasercon::access
