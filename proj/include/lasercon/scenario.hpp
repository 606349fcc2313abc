#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lasercon/ablation.hpp"
#include "lasercon/astro.hpp"
#include "lasercon/baselines.hpp"
#include "lasercon/formulations.hpp"
#include "lasercon/milp.hpp"
#include "lasercon/reward.hpp"

namespace lasercon::scenario {

/// `count` evenly spaced values from start to stop, both ends included.
std::vector<double> linspace(double start, double stop, std::size_t count);

/// Candidate platform slots: the Cartesian product of four axes, all circular.
struct SlotGrid {
  std::vector<double> altitude_km;
  std::vector<double> inclination_deg;
  std::vector<double> raan_deg;
  std::vector<double> arg_lat_deg;

  void validate() const;
  std::size_t size() const;
  /// Ordered altitude-major, then inclination, RAAN, argument of latitude.
  std::vector<astro::OrbitElements> elements(const astro::AstroConstants& k = {}) const;
};

struct SlotCatalog {
  std::vector<astro::OrbitElements> elements;
  astro::StateTable states;
};

SlotCatalog build_slot_states(const SlotGrid& grid, const astro::TimeGrid& time_grid,
                              const astro::AstroConstants& k = {});

struct AltitudeHistogram {
  std::vector<double> bin_lo_km;
  std::vector<double> bin_hi_km;
  std::vector<double> freq;

  void validate() const;
};

AltitudeHistogram load_histogram_csv(const std::filesystem::path& path);

/// Physical properties stamped onto every sampled object.
struct DebrisTemplate {
  double surface_density = 1.0;  // kg/m^2
  double mass = 0.0;             // kg
  double cross_section = 1.0;    // m^2
  std::string id_prefix = "d";
};

/// Circular orbits: altitude from a histogram bin (uniform inside the bin),
/// inclination uniform on [0, 180] deg, RAAN, argp and argument of latitude
/// uniform on [0, 360) deg. Object i depends only on (seed, stream, i).
std::vector<ablation::DebrisBody> sample_debris_field(const AltitudeHistogram& hist, std::size_t count,
                                                      std::uint64_t seed, const DebrisTemplate& tmpl = {},
                                                      std::uint64_t stream = 0,
                                                      const astro::AstroConstants& k = {});

/// Catalog CSV with columns id, sma_km, ecc, inc_deg, raan_deg, argp_deg,
/// anomaly_deg, mass_kg, rho_kg_m2.
std::vector<ablation::DebrisBody> load_debris_csv(const std::filesystem::path& path,
                                                  double cross_section = 1.0);

struct NamedOrbit {
  std::string id;
  astro::OrbitElements elements;
};

/// Any CSV with an id column and the six element columns; extra columns are
/// ignored.
std::vector<NamedOrbit> load_orbits_csv(const std::filesystem::path& path);

std::vector<reward::ValuableAsset> load_assets_csv(const std::filesystem::path& path,
                                                   double sphere_radius = 10.0);

struct DebrisSource {
  enum class Kind { Histogram, Catalog, Inline };
  Kind kind = Kind::Histogram;
  std::string histogram_csv;  // as written in the file
  std::size_t count = 0;
  DebrisTemplate tmpl;
  std::string catalog_csv;
  std::vector<ablation::DebrisBody> objects;
};

struct AssetSpec {
  std::string catalog_csv;
  std::vector<reward::ValuableAsset> objects;
  double sphere_radius = 10.0;  // km
};

struct SolverConfig {
  std::size_t node_cap = 1'000'000;
  double time_cap = 600.0;  // s
  double gap_target = 0.0;
  double objective_scale = 1e6;
  std::size_t esp_exact_max_candidates = 5000;
  milp::BoundMode mclp_bound = milp::BoundMode::Combinatorial;

  milp::Limits limits(milp::BoundMode bound) const;
};

struct WalkerConfig {
  std::size_t pairs = 20;
  std::vector<baselines::PhasePair> patterns;  // empty means all of them
};

struct ScenarioConfig {
  int schema_version = 1;
  std::string name = "scenario";
  astro::TimeGrid grid;
  ablation::LaserSpec laser;
  double epsilon = 0.0;  // km
  reward::RewardConfig reward;
  // G0 used by the placement problem when it differs from the scheduler's.
  std::optional<double> g0_mclp;
  SlotGrid slots;
  std::vector<DebrisSource> debris;
  AssetSpec assets;
  std::size_t platforms = 1;
  std::uint64_t seed = 0;
  SolverConfig solver;
  std::optional<std::size_t> engager_cap;  // unset: default rule
  bool wprime_design = true;
  bool wprime_scheduling = false;
  std::map<std::string, double> s_td;  // per debris id
  WalkerConfig walker;
  std::vector<std::size_t> sweep_p;
  formulations::ClspCaps clsp;
  unsigned threads = 1;
  // Propagated states plus the feasibility tensor must fit in this budget.
  std::size_t memory_limit_mb = 2048;
  // Directory that relative CSV paths are resolved against.
  std::filesystem::path base_dir;

  /// Every violated invariant, empty when the config is usable.
  std::vector<std::string> violations() const;
  void validate() const;
};

/// Throws ParseError (with line) or ValidationError (listing every problem).
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Fully materialized configuration, defaults included. Parsing it again
/// yields the same configuration.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// All debris sources in order; source i samples with RNG stream i.
std::vector<ablation::DebrisBody> materialize_debris(const ScenarioConfig& cfg,
                                                     const astro::AstroConstants& k = {});
std::vector<reward::ValuableAsset> materialize_assets(const ScenarioConfig& cfg);

}  // namespace lasercon::scenario
