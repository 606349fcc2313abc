#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "lasercon/error.hpp"
#include "lasercon/pipeline.hpp"

namespace {

int fail(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lasercon;
  CLI::App app{"Space-based laser constellation design and debris engagement scheduling"};
  app.set_version_flag("--version", std::string(LASERCON_VERSION));
  app.require_subcommand(1);

  pipeline::CommandOptions opts;
  std::string solver = "exact";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<unsigned> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--solver", solver, "exact, heuristic or export-only")
        ->check(CLI::IsMember({"exact", "heuristic", "export-only"}))
        ->capture_default_str();
    sub->add_option("--engager-cap", cap, "Largest engager set per debris and step");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* design = app.add_subcommand("design", "Choose platform slots (placement problem)");
  auto* sched = app.add_subcommand("schedule", "Schedule engagements for a fixed placement");
  auto* run = app.add_subcommand("run", "Design, then schedule");
  auto* clsp = app.add_subcommand("clsp", "Solve the joint placement and scheduling problem on a small instance");
  auto* sweep = app.add_subcommand("sweep", "Design and schedule for several platform counts");
  auto* walker = app.add_subcommand("walker", "Brute-force Walker-Delta baseline search");
  for (auto* sub : {design, sched, run, clsp, sweep, walker}) add_common(sub);
  sched->add_option("--placement", opts.placement, "Placement CSV from `design`")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    opts.solver = pipeline::parse_solver_mode(solver);
    opts.overrides = {seed, cap, threads};
    std::vector<std::filesystem::path> files;
    if (design->parsed()) files = pipeline::cmd_design(opts);
    if (sched->parsed()) files = pipeline::cmd_schedule(opts);
    if (run->parsed()) files = pipeline::cmd_run(opts);
    if (clsp->parsed()) files = pipeline::cmd_clsp(opts);
    if (sweep->parsed()) files = pipeline::cmd_sweep(opts);
    if (walker->parsed()) files = pipeline::cmd_walker(opts);
    for (const auto& f : files) std::cout << f.string() << "\n";
  } catch (const Error& e) {
    const std::string kind(to_string(e.kind()));
    std::string message = e.what();
    if (message.rfind(kind + ": ", 0) == 0) message.erase(0, kind.size() + 2);
    return fail(kind, message);
  } catch (const std::exception& e) {
    return fail("InternalError", e.what());
  }
  return 0;
}
