#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>

#include "lasercon/astro.hpp"
#include "lasercon/vec3.hpp"

namespace lasercon::ablation {

// Platform adjusts pulse energy so the on-target fluence stays fixed.
struct ConstantFluence {
  double phi_opt = 8500.0;  // J/m^2
};

// Fixed pulse energy; fluence falls off with the square of range.
struct ConstantEnergy {
  double pulse_energy = 300.0;  // J
};

using FluenceMode = std::variant<ConstantFluence, ConstantEnergy>;

struct LaserSpec {
  double d_eff = 1.5;             // m
  double t_tot = 0.9;             // system loss factor
  double b_sq = 2.0;              // beam quality B^2
  double zeta = 1.27;             // diffraction constant
  double wavelength = 355e-9;     // m
  double c_m = 99.0;              // N/MW
  double eta = 0.5;               // impulse transfer efficiency
  double prf = 56.0;              // Hz
  double engage_duration = 10.0;  // s
  double cool_duration = 120.0;   // s
  double u_min = 175.0;           // km
  double u_max = 325.0;           // km
  FluenceMode fluence_mode = ConstantFluence{};

  void validate() const;

  /// Momentum coupling in N*s/J.
  double coupling_si() const { return c_m * 1e-6; }
  /// Pulses delivered in one engagement window.
  long pulses_per_engagement() const;
};

struct DebrisBody {
  std::string id;
  double mass = 0.0;             // kg; 0 when unknown
  double surface_density = 0.0;  // kg/m^2; 0 when unknown
  double cross_section = 1.0;    // m^2
  astro::OrbitElements elements = astro::OrbitElements::circular(7000.0, 0.0, 0.0, 0.0);

  void validate() const;
  /// Mass used by the reward: the stated mass, else surface density times area.
  double effective_mass() const;
};

/// Impulse in m/s; the magnitude is cached on construction.
class DeltaV {
 public:
  DeltaV() = default;
  explicit DeltaV(const Vec3& vec) : vec_(vec), magnitude_(norm(vec)) {}

  const Vec3& vec() const { return vec_; }
  double magnitude() const { return magnitude_; }

 private:
  Vec3 vec_{};
  double magnitude_ = 0.0;
};

/// On-target fluence in J/m^2 at `range_km`. Throws RangeViolation outside
/// [u_min, u_max].
double fluence(const LaserSpec& spec, double range_km);

/// Velocity change from one pulse, m/s. Surface density takes precedence over
/// mass when both are given.
double per_pulse_dv(const LaserSpec& spec, const DebrisBody& debris, double range_km);

/// Impulse a single platform imparts over one engagement window, directed
/// from platform to debris.
DeltaV engagement_dv(const LaserSpec& spec, const DebrisBody& debris,
                     const astro::StateVector& platform_state,
                     const astro::StateVector& debris_state);

/// Vector sum of simultaneous contributions.
DeltaV compose_dva(std::span<const DeltaV> contributions);

/// Impulsive velocity change; position is untouched.
astro::StateVector apply_engagement(const astro::StateVector& debris_state, const DeltaV& dv);

}  // namespace lasercon::ablation
