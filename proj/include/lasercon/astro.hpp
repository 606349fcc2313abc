#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lasercon/vec3.hpp"

namespace lasercon::astro {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDeg = kPi / 180.0;

// Below this eccentricity an orbit is treated as circular: the anomaly is the
// argument of latitude and argp is pinned to zero.
inline constexpr double kCircularEcc = 1e-8;

struct AstroConstants {
  double mu = 398600.4418;   // km^3/s^2
  double r_earth = 6378.137;  // km
  double j2 = 1.08262668e-3;
};

/// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);

/// Osculating Keplerian elements, normalized and validated on construction.
///
/// `anomaly` is the true anomaly, or the argument of latitude for circular
/// orbits (ecc < kCircularEcc), in which case argp is forced to 0.
class OrbitElements {
 public:
  OrbitElements(double sma_km, double ecc, double inc_rad, double raan_rad, double argp_rad,
                double anomaly_rad);

  static OrbitElements circular(double sma_km, double inc_rad, double raan_rad, double arg_lat_rad) {
    return OrbitElements(sma_km, 0.0, inc_rad, raan_rad, 0.0, arg_lat_rad);
  }

  double sma() const { return sma_; }
  double ecc() const { return ecc_; }
  double inc() const { return inc_; }
  double raan() const { return raan_; }
  double argp() const { return argp_; }
  double anomaly() const { return anomaly_; }
  bool is_circular() const { return ecc_ < kCircularEcc; }

  double semi_latus_rectum() const { return sma_ * (1.0 - ecc_ * ecc_); }
  double periapsis_radius() const { return sma_ * (1.0 - ecc_); }
  double apoapsis_radius() const { return sma_ * (1.0 + ecc_); }

 private:
  double sma_;
  double ecc_;
  double inc_;
  double raan_;
  double argp_;
  double anomaly_;
};

struct StateVector {
  Vec3 r;  // km, ECI
  Vec3 v;  // km/s, ECI
  std::size_t epoch_step = 0;
};

struct TimeGrid {
  std::string epoch = "2024-02-26T04:30:51Z";
  double step_size = 130.0;  // s
  std::size_t steps = 2;

  void validate() const;
  double seconds_between(std::size_t from_step, std::size_t to_step) const {
    return (static_cast<double>(to_step) - static_cast<double>(from_step)) * step_size;
  }
};

struct SecularRates {
  double raan = 0.0;          // rad/s
  double argp = 0.0;          // rad/s
  double mean_anomaly = 0.0;  // rad/s, including the mean motion
};

StateVector elements_to_state(const OrbitElements& el, const AstroConstants& k = {},
                              std::size_t epoch_step = 0);

/// Throws HyperbolicState when ecc >= 1 (or energy >= 0) and RectilinearState
/// when the angular momentum vanishes.
OrbitElements state_to_elements(const StateVector& sv, const AstroConstants& k = {});

/// Periapsis radius of any conic through the state, h^2/mu/(1+e).
double periapsis_radius(const StateVector& sv, const AstroConstants& k = {});

/// Specific orbital energy v^2/2 - mu/r.
double specific_energy(const StateVector& sv, const AstroConstants& k = {});

/// Solves E - e sin E = M. Newton iteration, bisection fallback.
double solve_kepler(double mean_anomaly, double ecc);

double true_to_mean_anomaly(double true_anomaly, double ecc);
double mean_to_true_anomaly(double mean_anomaly, double ecc);

SecularRates secular_j2_rates(const OrbitElements& el, const AstroConstants& k = {});

/// First-order secular J2 propagation between two grid steps.
OrbitElements propagate_j2(const OrbitElements& el, const TimeGrid& grid, std::size_t from_step,
                           std::size_t to_step, const AstroConstants& k = {});

/// Same propagation, over an arbitrary duration in seconds.
OrbitElements propagate_j2_seconds(const OrbitElements& el, double dt, const AstroConstants& k = {});

/// Elements defined at `epoch_step`, ready to evaluate at any later step.
struct Track {
  OrbitElements elements;
  std::size_t epoch_step = 0;

  StateVector state_at(std::size_t step, const TimeGrid& grid, const AstroConstants& k = {}) const;
};

/// States of a set of objects sampled on every grid step, stored [t][object].
class StateTable {
 public:
  StateTable() = default;
  StateTable(std::size_t objects, std::size_t steps);

  static StateTable propagate(std::span<const OrbitElements> elements, const TimeGrid& grid,
                              const AstroConstants& k = {});

  std::size_t objects() const { return objects_; }
  std::size_t steps() const { return steps_; }
  const StateVector& at(std::size_t object, std::size_t step) const {
    return states_[step * objects_ + object];
  }
  StateVector& at(std::size_t object, std::size_t step) { return states_[step * objects_ + object]; }

 private:
  std::size_t objects_ = 0;
  std::size_t steps_ = 0;
  std::vector<StateVector> states_;
};

}  // namespace lasercon::astro
