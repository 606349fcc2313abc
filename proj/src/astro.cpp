#include "lasercon/astro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lasercon/error.hpp"

namespace lasercon::astro {

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative number can round up to exactly 2*pi.
  if (w >= kTwoPi) w = 0.0;
  return w;
}

OrbitElements::OrbitElements(double sma_km, double ecc, double inc_rad, double raan_rad,
                             double argp_rad, double anomaly_rad) {
  if (!(sma_km > 0.0) || !std::isfinite(sma_km)) {
    throw Error(ErrorKind::InvalidArgument, "semi-major axis must be positive and finite");
  }
  if (!(ecc >= 0.0 && ecc < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "eccentricity must lie in [0, 1)");
  }
  if (!(inc_rad >= 0.0 && inc_rad <= kPi)) {
    throw Error(ErrorKind::InvalidArgument, "inclination must lie in [0, pi]");
  }
  if (!std::isfinite(raan_rad) || !std::isfinite(argp_rad) || !std::isfinite(anomaly_rad)) {
    throw Error(ErrorKind::InvalidArgument, "angles must be finite");
  }
  sma_ = sma_km;
  ecc_ = ecc;
  inc_ = inc_rad;
  raan_ = wrap_two_pi(raan_rad);
  argp_ = ecc < kCircularEcc ? 0.0 : wrap_two_pi(argp_rad);
  anomaly_ = wrap_two_pi(anomaly_rad);
}

void TimeGrid::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw Error(ErrorKind::ValidationError, "time grid step_size must be positive");
  }
  if (steps < 2) {
    throw Error(ErrorKind::ValidationError, "time grid needs at least 2 steps");
  }
}

StateVector elements_to_state(const OrbitElements& el, const AstroConstants& k,
                              std::size_t epoch_step) {
  const double p = el.semi_latus_rectum();
  const double nu = el.anomaly();
  const double e = el.ecc();
  const double radius = p / (1.0 + e * std::cos(nu));
  const double vfac = std::sqrt(k.mu / p);

  const double co = std::cos(el.raan()), so = std::sin(el.raan());
  const double cw = std::cos(el.argp()), sw = std::sin(el.argp());
  const double ci = std::cos(el.inc()), si = std::sin(el.inc());

  const Vec3 pdir{co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si};
  const Vec3 qdir{-co * sw - so * cw * ci, -so * sw + co * cw * ci, cw * si};

  StateVector sv;
  sv.r = pdir * (radius * std::cos(nu)) + qdir * (radius * std::sin(nu));
  sv.v = pdir * (-vfac * std::sin(nu)) + qdir * (vfac * (e + std::cos(nu)));
  sv.epoch_step = epoch_step;
  return sv;
}

double specific_energy(const StateVector& sv, const AstroConstants& k) {
  return 0.5 * dot(sv.v, sv.v) - k.mu / norm(sv.r);
}

namespace {

Vec3 eccentricity_vector(const StateVector& sv, const AstroConstants& k) {
  const double rmag = norm(sv.r);
  const double v2 = dot(sv.v, sv.v);
  return (sv.r * (v2 - k.mu / rmag) - sv.v * dot(sv.r, sv.v)) / k.mu;
}

}  // namespace

double periapsis_radius(const StateVector& sv, const AstroConstants& k) {
  const Vec3 h = cross(sv.r, sv.v);
  const double e = norm(eccentricity_vector(sv, k));
  return dot(h, h) / k.mu / (1.0 + e);
}

OrbitElements state_to_elements(const StateVector& sv, const AstroConstants& k) {
  const double rmag = norm(sv.r);
  if (!(rmag > 0.0)) {
    throw Error(ErrorKind::RectilinearState, "zero position vector");
  }
  const Vec3 h = cross(sv.r, sv.v);
  const double hmag = norm(h);
  if (hmag <= 1e-12 * rmag * std::max(norm(sv.v), 1e-300) || hmag == 0.0) {
    throw Error(ErrorKind::RectilinearState, "state has no angular momentum");
  }
  const double energy = specific_energy(sv, k);
  const Vec3 evec = eccentricity_vector(sv, k);
  const double e = norm(evec);
  if (energy >= 0.0 || e >= 1.0) {
    throw Error(ErrorKind::HyperbolicState, "state is on an open (ecc >= 1) trajectory");
  }
  const double sma = 1.0 / (2.0 / rmag - dot(sv.v, sv.v) / k.mu);

  const Vec3 hhat = h / hmag;
  const double inc = std::acos(std::clamp(hhat.z, -1.0, 1.0));

  // In-plane reference direction: ascending node, or +X for equatorial orbits.
  const Vec3 node{-h.y, h.x, 0.0};
  const double node_mag = norm(node);
  const Vec3 pref = node_mag > 1e-12 * hmag ? node / node_mag : Vec3{1.0, 0.0, 0.0};
  const Vec3 qref = cross(hhat, pref);
  const double raan = std::atan2(pref.y, pref.x);

  if (e < kCircularEcc) {
    const double arg_lat = std::atan2(dot(sv.r, qref), dot(sv.r, pref));
    return OrbitElements(sma, e, inc, raan, 0.0, arg_lat);
  }
  const Vec3 ehat = evec / e;
  const double argp = std::atan2(dot(evec, qref), dot(evec, pref));
  const double nu = std::atan2(dot(sv.r, cross(hhat, ehat)), dot(sv.r, ehat));
  return OrbitElements(sma, e, inc, raan, argp, nu);
}

double solve_kepler(double mean_anomaly, double ecc) {
  const double offset = kTwoPi * std::round(mean_anomaly / kTwoPi);
  const double m = mean_anomaly - offset;  // in [-pi, pi]
  if (ecc == 0.0) return mean_anomaly;

  double lo = -kPi, hi = kPi;
  double e_anom = m + ecc * std::sin(m);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = e_anom - ecc * std::sin(e_anom) - m;
    if (std::abs(f) <= 1e-15) break;
    if (f > 0.0) {
      hi = e_anom;
    } else {
      lo = e_anom;
    }
    const double fp = 1.0 - ecc * std::cos(e_anom);
    double next = e_anom - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - e_anom) <= 1e-16) {
      e_anom = next;
      break;
    }
    e_anom = next;
  }
  return e_anom + offset;
}

double true_to_mean_anomaly(double true_anomaly, double ecc) {
  const double e_anom =
      std::atan2(std::sqrt(1.0 - ecc * ecc) * std::sin(true_anomaly), ecc + std::cos(true_anomaly));
  return e_anom - ecc * std::sin(e_anom);
}

double mean_to_true_anomaly(double mean_anomaly, double ecc) {
  const double e_anom = solve_kepler(mean_anomaly, ecc);
  return std::atan2(std::sqrt(1.0 - ecc * ecc) * std::sin(e_anom), std::cos(e_anom) - ecc);
}

SecularRates secular_j2_rates(const OrbitElements& el, const AstroConstants& k) {
  const double a = el.sma();
  const double e = el.ecc();
  const double n = std::sqrt(k.mu / (a * a * a));
  const double p = el.semi_latus_rectum();
  const double ratio = k.r_earth / p;
  const double factor = n * k.j2 * ratio * ratio;
  const double ci = std::cos(el.inc());
  SecularRates rates;
  rates.raan = -1.5 * factor * ci;
  rates.argp = 0.75 * factor * (5.0 * ci * ci - 1.0);
  rates.mean_anomaly = n + 0.75 * factor * std::sqrt(1.0 - e * e) * (3.0 * ci * ci - 1.0);
  return rates;
}

OrbitElements propagate_j2_seconds(const OrbitElements& el, double dt, const AstroConstants& k) {
  if (dt == 0.0) return el;
  const SecularRates rates = secular_j2_rates(el, k);
  const double raan = el.raan() + rates.raan * dt;
  if (el.is_circular()) {
    const double arg_lat = el.anomaly() + (rates.argp + rates.mean_anomaly) * dt;
    return OrbitElements(el.sma(), el.ecc(), el.inc(), raan, 0.0, arg_lat);
  }
  const double argp = el.argp() + rates.argp * dt;
  const double mean = true_to_mean_anomaly(el.anomaly(), el.ecc()) + rates.mean_anomaly * dt;
  const double nu = mean_to_true_anomaly(mean, el.ecc());
  return OrbitElements(el.sma(), el.ecc(), el.inc(), raan, argp, nu);
}

OrbitElements propagate_j2(const OrbitElements& el, const TimeGrid& grid, std::size_t from_step,
                           std::size_t to_step, const AstroConstants& k) {
  if (from_step > to_step || to_step >= grid.steps) {
    throw Error(ErrorKind::InvalidArgument, "propagation steps must satisfy from <= to < T");
  }
  return propagate_j2_seconds(el, grid.seconds_between(from_step, to_step), k);
}

StateVector Track::state_at(std::size_t step, const TimeGrid& grid, const AstroConstants& k) const {
  const OrbitElements now =
      propagate_j2_seconds(elements, grid.seconds_between(epoch_step, step), k);
  return elements_to_state(now, k, step);
}

StateTable::StateTable(std::size_t objects, std::size_t steps)
    : objects_(objects), steps_(steps), states_(objects * steps) {}

StateTable StateTable::propagate(std::span<const OrbitElements> elements, const TimeGrid& grid,
                                 const AstroConstants& k) {
  StateTable table(elements.size(), grid.steps);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const Track track{elements[i], 0};
    for (std::size_t t = 0; t < grid.steps; ++t) {
      table.at(i, t) = track.state_at(t, grid, k);
    }
  }
  return table;
}

}  // namespace lasercon::astro
