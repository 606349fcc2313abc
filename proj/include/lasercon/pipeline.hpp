#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lasercon/baselines.hpp"
#include "lasercon/formulations.hpp"
#include "lasercon/reward.hpp"
#include "lasercon/scenario.hpp"
#include "lasercon/scheduler.hpp"

namespace lasercon::pipeline {

enum class SolverMode { Exact, Heuristic, ExportOnly };

SolverMode parse_solver_mode(const std::string& text);

/// Command-line overrides applied on top of a scenario file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> engager_cap;
  std::optional<unsigned> threads;
};

/// Everything derived from a config before any optimization runs.
struct Scenario {
  scenario::ScenarioConfig cfg;
  astro::AstroConstants k;
  std::vector<ablation::DebrisBody> debris;
  std::vector<reward::ValuableAsset> assets;
  std::vector<reward::ConjunctionReport> reports;
  std::unique_ptr<reward::RewardContext> rewards;       // scheduling
  std::unique_ptr<reward::RewardContext> mclp_rewards;  // placement
  scenario::SlotCatalog slots;
  astro::StateTable debris_states;

  /// Engagement context for `engagers` candidate platforms.
  formulations::EngagementContext context(std::size_t engagers, bool placement) const;
  std::vector<double> thresholds() const;
};

Scenario prepare(scenario::ScenarioConfig cfg, const Overrides& overrides = {});

struct DesignResult {
  std::vector<std::size_t> placement;
  double pi = 0.0;
  milp::Status status = milp::Status::Optimal;
  double bound = 0.0;
  double gap = 0.0;
  std::size_t nodes = 0;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

formulations::MclpInstance mclp_instance(const Scenario& sc);
DesignResult design(const Scenario& sc, const formulations::MclpInstance& inst, std::size_t platforms,
                    SolverMode mode);

scheduler::MissionState schedule(const Scenario& sc, const std::vector<astro::OrbitElements>& platforms,
                                 SolverMode mode);

/// Score of a fixed constellation: the placement objective with every
/// satellite placed.
double score_constellation(const Scenario& sc, const std::vector<astro::OrbitElements>& sats);

baselines::WalkerSearch walker_search(const Scenario& sc);

/// Abstract CLSP instance: {steps, slots, debris, platforms, layers}; each
/// node is {parent, engagers, reward}. W is the union of engager sets unless
/// given as a list of [t, s, d] triples. An optional "encoding" key picks
/// sparse (default) or dense variables for `clsp`.
formulations::ClspInstance clsp_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Commands. Each writes its outputs and a manifest into `out_dir` and returns
// the list of files written.

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir = ".";
  SolverMode solver = SolverMode::Exact;
  Overrides overrides;
  std::filesystem::path placement;  // schedule only
};

std::vector<std::filesystem::path> cmd_design(const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_schedule(const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_run(const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_clsp(const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_sweep(const CommandOptions& opts);
std::vector<std::filesystem::path> cmd_walker(const CommandOptions& opts);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Metrics as written to metrics.json.
nlohmann::json metrics_json(const scheduler::Metrics& m, const scheduler::MissionState& state);

}  // namespace lasercon::pipeline
