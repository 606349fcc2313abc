#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lasercon/error.hpp"
#include "lasercon/ablation.hpp"

using namespace lasercon;
using namespace lasercon::ablation;

namespace {

DebrisBody plate(double rho) {
  DebrisBody d;
  d.id = "p";
  d.surface_density = rho;
  return d;
}

}  // namespace

TEST(Fluence, ConstantFluenceIsFlat) {
  const LaserSpec spec;
  EXPECT_DOUBLE_EQ(fluence(spec, 250.0), 8500.0);
  EXPECT_DOUBLE_EQ(fluence(spec, 175.0), 8500.0);
}

TEST(Fluence, OutsideRangeThrows) {
  const LaserSpec spec;
  try {
    fluence(spec, 400.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RangeViolation);
  }
}

TEST(Fluence, ConstantEnergyHandEvaluation) {
  LaserSpec spec;
  spec.fluence_mode = ConstantEnergy{300.0};
  spec.d_eff = 2.0;
  spec.wavelength = 335e-9;
  spec.u_min = 30.0;
  spec.u_max = 200.0;
  // 4 * 300 J * (2 m)^2 * 0.9 / (pi * 2^2 * 1.27^2 * (335 nm)^2 * (100 km)^2)
  const double numerator = 4.0 * 300.0 * 4.0 * 0.9;
  const double denominator = 3.141592653589793 * 4.0 * 1.6129 * 1.12225e-13 * 1e10;
  EXPECT_NEAR(fluence(spec, 100.0), numerator / denominator, 1e-9 * numerator / denominator);
}

TEST(Fluence, InverseSquare) {
  LaserSpec spec;
  spec.fluence_mode = ConstantEnergy{50.0};
  spec.u_min = 1.0;
  spec.u_max = 1000.0;
  EXPECT_NEAR(fluence(spec, 200.0) / fluence(spec, 100.0), 0.25, 1e-14);
}

TEST(PerPulse, CommonParameters) {
  const double dv = per_pulse_dv(LaserSpec{}, plate(1.0), 250.0);
  EXPECT_NEAR(dv, 0.5 * 99e-6 * 8500.0, 1e-12);
  EXPECT_NEAR(dv, 0.425, 0.02 * 0.425);
}

TEST(PerPulse, DensityScaling) {
  const LaserSpec spec;
  EXPECT_NEAR(per_pulse_dv(spec, plate(2.0), 200.0), 0.5 * per_pulse_dv(spec, plate(1.0), 200.0), 1e-15);
}

TEST(PerPulse, MassRatio) {
  const LaserSpec spec;
  DebrisBody light, heavy;
  light.mass = 800.0;
  heavy.mass = 9000.0;
  EXPECT_NEAR(per_pulse_dv(spec, light, 200.0) / per_pulse_dv(spec, heavy, 200.0), 11.25, 1e-12);
}

TEST(PerPulse, SurfaceDensityWins) {
  DebrisBody both = plate(1.0);
  both.mass = 5000.0;
  EXPECT_DOUBLE_EQ(per_pulse_dv(LaserSpec{}, both, 200.0), per_pulse_dv(LaserSpec{}, plate(1.0), 200.0));
}

TEST(PerPulse, UnresolvableBody) {
  DebrisBody none;
  try {
    per_pulse_dv(LaserSpec{}, none, 200.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnresolvableBody);
  }
}

TEST(Engagement, PulseCounts) {
  EXPECT_EQ(LaserSpec{}.pulses_per_engagement(), 560);
  LaserSpec large;
  large.engage_duration = 40.0;
  large.prf = 21.0;
  EXPECT_EQ(large.pulses_per_engagement(), 840);
}

TEST(Engagement, RadialAlignment) {
  astro::StateVector platform{{7000.0, 0.0, 0.0}, {0.0, 7.5, 0.0}};
  astro::StateVector debris{{7200.0, 0.0, 0.0}, {0.0, 7.4, 0.0}};
  const auto dv = engagement_dv(LaserSpec{}, plate(1.0), platform, debris);
  EXPECT_GT(dv.vec().x, 0.0);
  EXPECT_NEAR(dv.vec().y, 0.0, 1e-15);
  EXPECT_NEAR(dv.vec().z, 0.0, 1e-15);
  EXPECT_NEAR(dv.magnitude(), 560 * 0.5 * 99e-6 * 8500.0, 1e-9);
}

TEST(Engagement, ZeroBaseline) {
  astro::StateVector s{{7000.0, 0.0, 0.0}, {0.0, 7.5, 0.0}};
  try {
    engagement_dv(LaserSpec{}, plate(1.0), s, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroBaseline);
  }
}

TEST(Dva, AntiparallelCancels) {
  const std::vector<DeltaV> parts{DeltaV({0.1, 0.0, 0.0}), DeltaV({-0.1, 0.0, 0.0})};
  const auto sum = compose_dva(parts);
  EXPECT_EQ(sum.vec(), (Vec3{0.0, 0.0, 0.0}));
  EXPECT_EQ(sum.magnitude(), 0.0);
}

TEST(Dva, SingleIsIdentity) {
  const std::vector<DeltaV> parts{DeltaV({0.3, -0.2, 0.1})};
  EXPECT_EQ(compose_dva(parts).vec(), parts[0].vec());
}

TEST(Dva, OrthogonalMatchesSequential) {
  const std::vector<DeltaV> parts{DeltaV({0.1, 0.0, 0.0}), DeltaV({0.0, 0.1, 0.0})};
  const auto sum = compose_dva(parts);
  EXPECT_NEAR(sum.magnitude(), 0.1 * std::sqrt(2.0), 1e-15);
  const astro::StateVector s{{7000.0, 0.0, 0.0}, {0.0, 7.5, 0.0}};
  auto seq = s;
  for (const auto& p : parts) seq = apply_engagement(seq, p);
  const auto once = apply_engagement(s, sum);
  EXPECT_NEAR(norm(once.v - seq.v), 0.0, 1e-15);
}

TEST(Apply, ZeroIsIdentityAndRadiusPreserved) {
  const astro::StateVector s{{7000.0, 10.0, -3.0}, {0.1, 7.5, 0.2}};
  const auto same = apply_engagement(s, DeltaV{});
  EXPECT_EQ(same.r, s.r);
  EXPECT_EQ(same.v, s.v);
  const auto moved = apply_engagement(s, DeltaV({5.0, -20.0, 1.0}));
  EXPECT_EQ(norm(moved.r), norm(s.r));
}

TEST(Apply, RetrogradeLowersPeriapsis) {
  const auto s = astro::elements_to_state(astro::OrbitElements::circular(7000.0, 0.5, 0.0, 0.0));
  const auto slowed = apply_engagement(s, DeltaV(normalized(s.v) * -50.0));
  EXPECT_LT(astro::periapsis_radius(slowed), 7000.0);
}

TEST(Spec, Validation) {
  LaserSpec spec;
  spec.u_min = 400.0;
  EXPECT_THROW(spec.validate(), Error);
  LaserSpec bad_eta;
  bad_eta.eta = 0.0;
  EXPECT_THROW(bad_eta.validate(), Error);
}
