#include <cmath>
#include <filesystem>
#include <fstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "lasercon/error.hpp"
#include "lasercon/rng.hpp"
#include "lasercon/scenario.hpp"

using namespace lasercon;
using namespace lasercon::scenario;
using astro::kDeg;

namespace {

const std::string kData = LASERCON_DATA_DIR;

std::string minimal(const std::string& extra = "") {
  return R"({"time_grid": {"step_size_s": 130, "steps": 4},
             "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]},
             "debris": {"source": "inline", "objects": [
               {"id": "x", "sma_km": 7000, "inc_deg": 50, "rho_kg_m2": 1}]})" +
         extra + "}";
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Rng, CounterBased) {
  CounterRng a(7, 1), b(7, 1), c(7, 2);
  for (int i = 0; i < 5; ++i) a.next();
  EXPECT_EQ(a.next(), b.at(5));
  EXPECT_NE(b.at(0), c.at(0));
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
  }
}

TEST(Grid, Linspace) {
  EXPECT_EQ(linspace(0.0, 360.0, 10).back(), 360.0);
  EXPECT_EQ(linspace(0.0, 360.0, 10)[1], 40.0);
  EXPECT_EQ(linspace(5.0, 9.0, 1), (std::vector<double>{5.0}));
}

TEST(Grid, SmallCaseSize) {
  SlotGrid g{linspace(400, 1100, 9), linspace(0, 180, 9), linspace(0, 360, 10), linspace(0, 360, 10)};
  EXPECT_EQ(g.size(), 8100u);
  EXPECT_EQ(g.elements().size(), 8100u);
}

TEST(Grid, SingleSlotAndStates) {
  SlotGrid g{{620.0}, {51.6}, {10.0}, {20.0}};
  astro::TimeGrid tg;
  tg.steps = 3;
  const auto cat = build_slot_states(g, tg);
  ASSERT_EQ(cat.elements.size(), 1u);
  const auto expected = astro::elements_to_state(
      astro::OrbitElements::circular(6378.137 + 620.0, 51.6 * kDeg, 10.0 * kDeg, 20.0 * kDeg));
  EXPECT_NEAR(norm(cat.states.at(0, 0).r - expected.r), 0.0, 1e-9);
  EXPECT_NEAR(norm(cat.states.at(0, 0).v - expected.v), 0.0, 1e-12);
}

TEST(Grid, EmptyAxisRejected) {
  SlotGrid g{{}, {1.0}, {1.0}, {1.0}};
  EXPECT_THROW(g.validate(), Error);
}

TEST(Sampling, EmptyAndSingleBin) {
  AltitudeHistogram h{{500.0}, {520.0}, {1.0}};
  EXPECT_TRUE(sample_debris_field(h, 0, 1).empty());
  const auto field = sample_debris_field(h, 500, 3);
  ASSERT_EQ(field.size(), 500u);
  for (const auto& d : field) {
    const double alt = d.elements.sma() - 6378.137;
    EXPECT_GE(alt, 500.0 - 1e-9);
    EXPECT_LE(alt, 520.0 + 1e-9);
    EXPECT_LE(d.elements.inc(), astro::kPi);
    EXPECT_EQ(d.elements.ecc(), 0.0);
    EXPECT_EQ(d.surface_density, 1.0);
  }
  EXPECT_EQ(field[3].id, "d3");
}

TEST(Sampling, PrefixIsIndependentOfCount) {
  const auto h = load_histogram_csv(kData + "/small_debris_histogram.csv");
  const auto a = sample_debris_field(h, 10, 9);
  const auto b = sample_debris_field(h, 50, 9);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(a[i].elements.sma(), b[i].elements.sma());
    EXPECT_EQ(a[i].elements.anomaly(), b[i].elements.anomaly());
  }
  EXPECT_NE(sample_debris_field(h, 1, 10)[0].elements.sma(), a[0].elements.sma());
}

TEST(Sampling, ChiSquaredBinOccupancy) {
  AltitudeHistogram h{{300, 400, 500, 600, 700}, {400, 500, 600, 700, 800}, {0.1, 0.3, 0.25, 0.05, 0.3}};
  const std::size_t n = 100000;
  const auto field = sample_debris_field(h, n, 2024);
  std::vector<double> counts(5, 0.0);
  for (const auto& d : field) {
    const double alt = d.elements.sma() - 6378.137;
    counts[std::min<std::size_t>(4, static_cast<std::size_t>((alt - 300.0) / 100.0))] += 1.0;
  }
  double stat = 0.0;
  for (std::size_t b = 0; b < 5; ++b) {
    const double expected = h.freq[b] * n;
    stat += (counts[b] - expected) * (counts[b] - expected) / expected;
  }
  const boost::math::chi_squared dist(4.0);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, stat)), 0.01);
}

TEST(Csv, Loaders) {
  const auto h = load_histogram_csv(kData + "/small_debris_histogram.csv");
  EXPECT_EQ(h.freq.size(), 100u);
  const auto large = load_debris_csv(kData + "/large_debris.csv");
  ASSERT_EQ(large.size(), 50u);
  EXPECT_EQ(large[0].id, "L01");
  EXPECT_EQ(large[0].mass, 9000.0);
  const auto assets = load_assets_csv(kData + "/assets.csv");
  ASSERT_EQ(assets.size(), 10u);
  EXPECT_EQ(assets[0].id, "k1");
  EXPECT_NEAR(assets[0].elements.inc(), 52.94 * kDeg, 1e-12);
}

TEST(Csv, ParseErrorCarriesLine) {
  const auto path = std::filesystem::temp_directory_path() / "lasercon_bad.csv";
  {
    std::ofstream out(path);
    out << "id,sma_km,ecc,inc_deg,raan_deg,argp_deg,anomaly_deg\nok,7000,0,1,2,3,4\nbad,abc,0,1,2,3,4\n";
  }
  try {
    load_orbits_csv(path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  std::filesystem::remove(path);
}

TEST(Config, SmallPresetMatchesLaserTable) {
  const auto cfg = load_scenario(kData + "/presets/small_debris.json");
  EXPECT_EQ(cfg.laser.u_min, 175.0);
  EXPECT_EQ(cfg.laser.u_max, 325.0);
  EXPECT_EQ(cfg.grid.step_size, 130.0);
  EXPECT_EQ(cfg.laser.prf, 56.0);
  EXPECT_EQ(cfg.laser.eta, 0.5);
  EXPECT_EQ(cfg.laser.pulses_per_engagement(), 560);
  EXPECT_EQ(cfg.slots.size(), 8100u);
}

TEST(Config, AllPresetsParse) {
  for (const char* name : {"small_debris", "large_debris", "mixed_debris", "constant_energy"}) {
    const auto cfg = load_scenario(kData + "/presets/" + name + ".json");
    EXPECT_NO_THROW(cfg.validate()) << name;
  }
  const auto large = load_scenario(kData + "/presets/large_debris.json");
  EXPECT_EQ(large.laser.pulses_per_engagement(), 840);
}

TEST(Config, DefaultsEchoed) {
  const auto cfg = parse_scenario(minimal());
  EXPECT_EQ(cfg.seed, 0u);
  const auto echo = to_json(cfg);
  EXPECT_EQ(echo.at("seed"), 0);
  const auto again = parse_scenario(echo);
  EXPECT_EQ(to_json(again), echo);
}

TEST(Config, NegativeStepSize) {
  const std::string text = R"({"time_grid": {"step_size_s": -5, "steps": 4},
     "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]}})";
  EXPECT_EQ(kind_of([&] { parse_scenario(text); }), ErrorKind::ValidationError);
}

TEST(Config, UnknownKeyAndSyntax) {
  EXPECT_EQ(kind_of([&] { parse_scenario(minimal(R"(, "bogus": 1)")); }), ErrorKind::ValidationError);
  try {
    parse_scenario(std::string("{\n\"seed\": 1,\n oops }"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Config, ErrorsAreAggregated) {
  const std::string text = R"({"time_grid": {"step_size_s": -5, "steps": 0},
     "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]}})";
  try {
    parse_scenario(text);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("step"), std::string::npos);
    EXPECT_GE(std::count(msg.begin(), msg.end(), '\n'), 2) << msg;
  }
}

TEST(Config, AxisRangeForm) {
  const auto cfg = parse_scenario(std::string(R"({"time_grid": {"step_size_s": 130, "steps": 4},
     "slot_grid": {"altitude_km": {"start": 400, "stop": 1100, "count": 9}, "inclination_deg": [50],
                   "raan_deg": [0], "arg_lat_deg": [0]}})"));
  EXPECT_EQ(cfg.slots.altitude_km.size(), 9u);
  EXPECT_EQ(cfg.slots.altitude_km[1], 487.5);
}

TEST(Config, SourcesUseSeparateStreams) {
  const std::string hist = kData + "/small_debris_histogram.csv";
  const std::string text = R"({"time_grid": {"step_size_s": 130, "steps": 4},
     "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]},
     "seed": 5,
     "debris": [
       {"source": "histogram", "histogram_csv": ")" + hist + R"(", "count": 3, "id_prefix": "a"},
       {"source": "histogram", "histogram_csv": ")" + hist + R"(", "count": 3, "id_prefix": "b"}]})";
  const auto debris = materialize_debris(parse_scenario(text));
  ASSERT_EQ(debris.size(), 6u);
  EXPECT_EQ(debris[0].id, "a0");
  EXPECT_EQ(debris[3].id, "b0");
  EXPECT_NE(debris[0].elements.sma(), debris[3].elements.sma());
}

TEST(Config, DuplicateIdsRejected) {
  const std::string text = R"({"time_grid": {"step_size_s": 130, "steps": 4},
     "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]},
     "debris": {"source": "inline", "objects": [
        {"id": "x", "sma_km": 7000, "inc_deg": 50, "rho_kg_m2": 1},
        {"id": "x", "sma_km": 7010, "inc_deg": 50, "rho_kg_m2": 1}]}})";
  EXPECT_EQ(kind_of([&] { materialize_debris(parse_scenario(text)); }), ErrorKind::ValidationError);
}

TEST(Config, MassAndDensityMissing) {
  const std::string text = R"({"time_grid": {"step_size_s": 130, "steps": 4},
     "slot_grid": {"altitude_km": [600], "inclination_deg": [50], "raan_deg": [0], "arg_lat_deg": [0]},
     "debris": {"source": "inline", "objects": [{"id": "x", "sma_km": 7000, "inc_deg": 50}]}})";
  EXPECT_THROW(parse_scenario(text), Error);
}
