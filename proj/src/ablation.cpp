#include "lasercon/ablation.hpp"

#include <cmath>
#include <type_traits>

#include "lasercon/error.hpp"

namespace lasercon::ablation {

namespace {

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

void LaserSpec::validate() const {
  if (!positive(d_eff) || !positive(t_tot) || !positive(b_sq) || !positive(zeta) ||
      !positive(wavelength) || !positive(c_m) || !positive(prf) || !positive(engage_duration) ||
      !positive(cool_duration) || !positive(u_min) || !positive(u_max)) {
    throw Error(ErrorKind::ValidationError, "laser parameters must all be positive");
  }
  if (!(u_min < u_max)) {
    throw Error(ErrorKind::ValidationError, "laser range requires u_min < u_max");
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::ValidationError, "eta must lie in (0, 1]");
  }
  const bool mode_ok = std::visit(
      [](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, ConstantFluence>) {
          return positive(mode.phi_opt);
        } else {
          return positive(mode.pulse_energy);
        }
      },
      fluence_mode);
  if (!mode_ok) {
    throw Error(ErrorKind::ValidationError, "fluence mode parameter must be positive");
  }
}

long LaserSpec::pulses_per_engagement() const { return std::lround(engage_duration * prf); }

void DebrisBody::validate() const {
  if (!(mass > 0.0) && !(surface_density > 0.0)) {
    throw Error(ErrorKind::UnresolvableBody,
                "debris '" + id + "' needs a positive mass or surface density");
  }
  if (!(cross_section > 0.0)) {
    throw Error(ErrorKind::ValidationError, "debris '" + id + "' cross-section must be positive");
  }
}

double DebrisBody::effective_mass() const {
  if (mass > 0.0) return mass;
  return surface_density * cross_section;
}

double fluence(const LaserSpec& spec, double range_km) {
  if (!(range_km >= spec.u_min && range_km <= spec.u_max)) {
    throw Error(ErrorKind::RangeViolation, "range " + std::to_string(range_km) +
                                               " km outside laser operating bounds");
  }
  if (const auto* fixed = std::get_if<ConstantFluence>(&spec.fluence_mode)) {
    return fixed->phi_opt;
  }
  const double energy = std::get<ConstantEnergy>(spec.fluence_mode).pulse_energy;
  const double u = range_km * 1e3;
  const double b4 = spec.b_sq * spec.b_sq;
  return 4.0 * energy * spec.d_eff * spec.d_eff * spec.t_tot /
         (astro::kPi * b4 * spec.zeta * spec.zeta * spec.wavelength * spec.wavelength * u * u);
}

double per_pulse_dv(const LaserSpec& spec, const DebrisBody& debris, double range_km) {
  const double phi = fluence(spec, range_km);
  if (debris.surface_density > 0.0) {
    return spec.eta * spec.coupling_si() * phi / debris.surface_density;
  }
  if (debris.mass > 0.0) {
    return spec.eta * spec.coupling_si() * phi * debris.cross_section / debris.mass;
  }
  throw Error(ErrorKind::UnresolvableBody,
              "debris '" + debris.id + "' has neither surface density nor mass");
}

DeltaV engagement_dv(const LaserSpec& spec, const DebrisBody& debris,
                     const astro::StateVector& platform_state,
                     const astro::StateVector& debris_state) {
  const Vec3 baseline = debris_state.r - platform_state.r;
  const double range = norm(baseline);
  if (range < 1e-3) {
    throw Error(ErrorKind::ZeroBaseline, "platform and debris closer than 1 m");
  }
  const double per_pulse = per_pulse_dv(spec, debris, range);
  const double pulses = static_cast<double>(spec.pulses_per_engagement());
  return DeltaV(baseline * (pulses * per_pulse / range));
}

DeltaV compose_dva(std::span<const DeltaV> contributions) {
  Vec3 sum{};
  for (const DeltaV& dv : contributions) sum += dv.vec();
  return DeltaV(sum);
}

astro::StateVector apply_engagement(const astro::StateVector& debris_state, const DeltaV& dv) {
  astro::StateVector out = debris_state;
  out.v += dv.vec() * 1e-3;
  return out;
}

}  // namespace lasercon::ablation
