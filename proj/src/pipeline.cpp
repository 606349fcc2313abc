#include "lasercon/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "lasercon/error.hpp"

namespace lasercon::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

SolverMode parse_solver_mode(const std::string& text) {
  if (text == "exact") return SolverMode::Exact;
  if (text == "heuristic") return SolverMode::Heuristic;
  if (text == "export-only") return SolverMode::ExportOnly;
  throw Error(ErrorKind::InvalidArgument, "unknown solver '" + text + "' (exact, heuristic, export-only)");
}

namespace {

const char* mode_name(SolverMode m) {
  switch (m) {
    case SolverMode::Exact: return "exact";
    case SolverMode::Heuristic: return "heuristic";
    case SolverMode::ExportOnly: return "export-only";
  }
  return "exact";
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string deg(double rad) { return num(rad / astro::kDeg); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot rename " + tmp.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------

formulations::EngagementContext Scenario::context(std::size_t engagers, bool placement) const {
  formulations::EngagementContext ctx;
  ctx.grid = cfg.grid;
  ctx.laser = cfg.laser;
  ctx.access = access::AccessParams::from_laser(cfg.laser, cfg.epsilon);
  ctx.rewards = placement ? mclp_rewards.get() : rewards.get();
  ctx.engager_cap = cfg.engager_cap ? *cfg.engager_cap : access::default_engager_cap(engagers, debris.size());
  ctx.wprime_gate = cfg.wprime_scheduling;
  ctx.k = k;
  return ctx;
}

std::vector<double> Scenario::thresholds() const {
  if (cfg.s_td.empty()) return {};
  std::vector<double> out;
  for (const auto& b : debris) {
    const auto it = cfg.s_td.find(b.id);
    out.push_back(it == cfg.s_td.end() ? 1.0 : it->second);
  }
  return out;
}

Scenario prepare(scenario::ScenarioConfig cfg, const Overrides& overrides) {
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.engager_cap) cfg.engager_cap = *overrides.engager_cap;
  if (overrides.threads) cfg.threads = *overrides.threads;
  cfg.validate();

  Scenario sc;
  sc.cfg = std::move(cfg);
  sc.debris = scenario::materialize_debris(sc.cfg, sc.k);
  sc.assets = scenario::materialize_assets(sc.cfg);

  const double T = static_cast<double>(sc.cfg.grid.steps);
  const double S = static_cast<double>(sc.cfg.slots.size());
  const double D = static_cast<double>(sc.debris.size());
  const double bytes = (S + D + static_cast<double>(sc.assets.size())) * T * sizeof(astro::StateVector) + T * S * D / 8.0;
  const double limit = static_cast<double>(sc.cfg.memory_limit_mb) * 1024.0 * 1024.0;
  if (bytes > limit) {
    throw Error(ErrorKind::InstanceTooLarge,
                "scenario needs about " + std::to_string(static_cast<long long>(bytes / 1048576.0)) +
                    " MiB of states and feasibility data (limit " + std::to_string(sc.cfg.memory_limit_mb) +
                    " MiB); reduce steps, slots or debris, or raise memory_limit_mb");
  }
  for (const auto& [id, _] : sc.cfg.s_td) {
    const bool known = std::any_of(sc.debris.begin(), sc.debris.end(), [&](const auto& b) { return b.id == id; });
    if (!known) throw Error(ErrorKind::ValidationError, "s_td names unknown debris '" + id + "'");
  }

  auto rcfg = sc.cfg.reward;
  if (rcfg.m_max <= 0.0) rcfg.m_max = sc.debris.empty() ? 1.0 : reward::max_effective_mass(sc.debris);
  sc.cfg.reward.m_max = rcfg.m_max;
  sc.reports = reward::screen_conjunctions(sc.debris, sc.assets, sc.cfg.grid, rcfg, sc.k);
  sc.rewards = std::make_unique<reward::RewardContext>(rcfg, sc.assets, sc.cfg.grid, sc.reports, sc.k);
  auto mcfg = rcfg;
  if (sc.cfg.g0_mclp) mcfg.g0 = *sc.cfg.g0_mclp;
  sc.mclp_rewards = std::make_unique<reward::RewardContext>(mcfg, sc.assets, sc.cfg.grid, sc.reports, sc.k);

  sc.slots = scenario::build_slot_states(sc.cfg.slots, sc.cfg.grid, sc.k);
  std::vector<astro::OrbitElements> els;
  for (const auto& b : sc.debris) els.push_back(b.elements);
  sc.debris_states = astro::StateTable::propagate(els, sc.cfg.grid, sc.k);
  return sc;
}

formulations::MclpInstance mclp_instance(const Scenario& sc) {
  const auto th = sc.thresholds();
  return formulations::build_mclp(sc.context(sc.slots.elements.size(), true), sc.debris, sc.slots.states,
                                  sc.debris_states, sc.cfg.platforms, th, sc.cfg.wprime_design, sc.cfg.threads);
}

DesignResult design(const Scenario& sc, const formulations::MclpInstance& inst, std::size_t platforms,
                    SolverMode mode) {
  auto local = inst;
  local.platforms = platforms;
  const auto model = formulations::build_mclp_model(local);
  milp::MilpSolution sol;
  if (mode == SolverMode::Heuristic) {
    sol = milp::solve_heuristic(model.model, milp::StructureHint::CoverageCardinality);
  } else {
    try {
      sol = milp::solve_exact(model.model, sc.cfg.solver.limits(sc.cfg.solver.mclp_bound));
    } catch (const milp::LimitsExceeded& e) {
      sol = e.incumbent();
      if (sol.assignment.empty()) throw;
    }
  }
  DesignResult r;
  for (std::size_t s = 0; s < model.z.size(); ++s) {
    if (sol.assignment[model.z[s]]) r.placement.push_back(s);
  }
  r.pi = sol.objective_value;
  r.status = sol.status;
  r.bound = sol.bound;
  r.gap = sol.gap;
  r.nodes = sol.nodes;
  r.variables = model.model.num_variables();
  r.constraints = model.model.num_constraints();
  return r;
}

scheduler::MissionState schedule(const Scenario& sc, const std::vector<astro::OrbitElements>& platforms,
                                 SolverMode mode) {
  scheduler::SchedulerOptions opts;
  opts.solver = mode == SolverMode::Heuristic ? scheduler::SolverChoice::Heuristic : scheduler::SolverChoice::Exact;
  opts.esp_exact_max_candidates = sc.cfg.solver.esp_exact_max_candidates;
  opts.limits = sc.cfg.solver.limits(milp::BoundMode::Lp);
  // Step subproblems are small; rounding would break near-ties between candidates.
  opts.limits.objective_scale = 0.0;
  return scheduler::run_mission(sc.context(platforms.size(), false), sc.debris, platforms, opts);
}

double score_constellation(const Scenario& sc, const std::vector<astro::OrbitElements>& sats) {
  const auto states = astro::StateTable::propagate(sats, sc.cfg.grid, sc.k);
  const auto th = sc.thresholds();
  const auto inst = formulations::build_mclp(sc.context(sats.size(), true), sc.debris, states, sc.debris_states,
                                             sats.size(), th, sc.cfg.wprime_design, 1);
  std::vector<std::size_t> all(sats.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return formulations::score_placement(inst, all);
}

baselines::WalkerSearch walker_search(const Scenario& sc) {
  std::vector<double> sma, inc;
  for (double h : sc.cfg.slots.altitude_km) sma.push_back(sc.k.r_earth + h);
  for (double i : sc.cfg.slots.inclination_deg) inc.push_back(i * astro::kDeg);
  const auto pairs = baselines::sample_shell_pairs(sma, inc, sc.cfg.walker.pairs, sc.cfg.seed);
  const auto patterns =
      sc.cfg.walker.patterns.empty() ? baselines::enumerate_patterns(sc.cfg.platforms) : sc.cfg.walker.patterns;
  return baselines::best_walker(
      sc.cfg.platforms, pairs, patterns,
      [&sc](std::span<const astro::OrbitElements> sats) {
        return score_constellation(sc, std::vector<astro::OrbitElements>(sats.begin(), sats.end()));
      },
      sc.cfg.threads);
}

formulations::ClspInstance clsp_from_json(const json& doc) {
  formulations::ClspInstance inst;
  try {
    inst.steps = doc.at("steps").get<std::size_t>();
    inst.slots = doc.at("slots").get<std::size_t>();
    inst.debris = doc.at("debris").get<std::size_t>();
    inst.platforms = doc.at("platforms").get<std::size_t>();
    for (const auto& layer : doc.at("layers")) {
      std::vector<std::vector<formulations::ClspNode>> per_debris;
      for (const auto& nodes : layer) {
        std::vector<formulations::ClspNode> out;
        for (const auto& n : nodes) {
          formulations::ClspNode node;
          if (n.contains("parent") && !n.at("parent").is_null()) node.parent = n.at("parent").get<std::size_t>();
          if (n.contains("engagers")) node.engagers = n.at("engagers").get<std::vector<std::size_t>>();
          node.reward = n.value("reward", 0.0);
          out.push_back(std::move(node));
        }
        per_debris.push_back(std::move(out));
      }
      inst.layers.push_back(std::move(per_debris));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("CLSP instance: ") + e.what());
  }
  inst.w = access::FeasibilityTensor(inst.steps, inst.slots, inst.debris);
  auto set_w = [&](std::size_t t, std::size_t s, std::size_t d) {
    if (t >= inst.steps || s >= inst.slots || d >= inst.debris) {
      throw Error(ErrorKind::InvalidArgument, "CLSP instance: W entry out of range");
    }
    inst.w.set(t, s, d, true);
  };
  if (doc.contains("w")) {
    for (const auto& e : doc.at("w")) set_w(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<std::size_t>());
  } else {
    for (std::size_t t = 1; t < inst.layers.size(); ++t) {
      for (std::size_t d = 0; d < inst.layers[t].size(); ++d) {
        for (const auto& node : inst.layers[t][d]) {
          for (std::size_t s : node.engagers) set_w(t - 1, s, d);
        }
      }
    }
  }
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// Output writers

namespace {

class Outputs {
 public:
  Outputs(fs::path dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    write_atomic(dir_ / name, content);
    files_.push_back(dir_ / name);
  }
  void json_file(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }
  void mps(const std::string& name, const milp::MilpModel& model) {
    milp::export_mps(model, dir_ / name);
    files_.push_back(dir_ / name);
  }

  std::vector<fs::path> finish(const std::string& config_hash, std::uint64_t seed, SolverMode solver) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json names = json::array();
    for (const auto& f : files_) names.push_back(f.filename().string());
    names.push_back("manifest.json");
    json manifest{{"schema_version", 1},
                  {"command", command_},
                  {"config_hash", config_hash},
                  {"seed", seed},
                  {"solver", mode_name(solver)},
                  {"code_version", LASERCON_VERSION},
                  {"wall_time_s", wall},
                  {"outputs", names}};
    write_atomic(dir_ / "manifest.json", manifest.dump(2) + "\n");
    auto out = files_;
    out.push_back(dir_ / "manifest.json");
    return out;
  }

 private:
  fs::path dir_;
  std::string command_;
  std::vector<fs::path> files_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string placement_csv(const Scenario& sc, const std::vector<std::size_t>& placement) {
  std::string s = "id,slot,sma_km,ecc,inc_deg,raan_deg,argp_deg,anomaly_deg\n";
  for (std::size_t i = 0; i < placement.size(); ++i) {
    const auto& el = sc.slots.elements[placement[i]];
    s += "p" + std::to_string(i) + "," + std::to_string(placement[i]) + "," + num(el.sma()) + "," + num(el.ecc()) +
         "," + deg(el.inc()) + "," + deg(el.raan()) + "," + deg(el.argp()) + "," + deg(el.anomaly()) + "\n";
  }
  return s;
}

json design_json(const DesignResult& r, std::size_t platforms, std::size_t slots) {
  return json{{"schema_version", 1},     {"pi", r.pi},
              {"status", milp::to_string(r.status)},
              {"bound", r.bound},        {"gap", r.gap},
              {"nodes", r.nodes},        {"platforms", platforms},
              {"slots", slots},          {"variables", r.variables},
              {"constraints", r.constraints}, {"placement", r.placement}};
}

std::string engagements_csv(const scheduler::MissionState& state) {
  std::string s = "step,debris_id,engagers,dv_x_m_s,dv_y_m_s,dv_z_m_s,dv_m_s,h_before_km,h_after_km,c0,c,dh,m,reward\n";
  for (const auto& e : state.events) {
    std::string eng;
    for (std::size_t i = 0; i < e.engagers.size(); ++i) eng += (i ? ";" : "") + std::to_string(e.engagers[i]);
    s += std::to_string(e.step) + "," + e.debris_id + "," + eng + "," + num(e.dv.x) + "," + num(e.dv.y) + "," +
         num(e.dv.z) + "," + num(norm(e.dv)) + "," + num(e.h_before) + "," + num(e.h_after) + "," +
         num(e.terms.c0) + "," + num(e.terms.c) + "," + num(e.terms.dh) + "," + num(e.terms.m) + "," +
         num(e.reward) + "\n";
  }
  return s;
}

std::string timeline_csv(const scheduler::Metrics& m) {
  std::string s = "step,cum_engagements,cum_deorbits\n";
  for (const auto& row : m.timeline) {
    s += std::to_string(row.step) + "," + std::to_string(row.cum_engagements) + "," +
         std::to_string(row.cum_deorbits) + "\n";
  }
  return s;
}

std::string conjunctions_csv(const Scenario& sc, const scheduler::MissionState& state) {
  std::string s = "debris_id,asset_id,first_conjunction_step,tca_step,miss_pre_km,tca_post_step,miss_post_km,engaged\n";
  std::vector<astro::OrbitElements> els;
  for (const auto& a : sc.assets) els.push_back(a.elements);
  const auto asset_states = astro::StateTable::propagate(els, sc.cfg.grid, sc.k);
  for (const auto& r : sc.reports) {
    if (!r.conjunction) continue;
    std::size_t d = 0, a = 0;
    while (d < state.debris.size() && state.debris[d].body.id != r.debris_id) ++d;
    while (a < sc.assets.size() && sc.assets[a].id != r.asset_id) ++a;
    if (d == state.debris.size() || a == sc.assets.size()) continue;
    const auto& rec = state.debris[d];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_t = 0;
    for (std::size_t t = 0; t < sc.cfg.grid.steps; ++t) {
      const double dist = norm(rec.state_at(t, sc.cfg.grid, sc.k).r - asset_states.at(a, t).r);
      if (dist < best) {
        best = dist;
        best_t = t;
      }
    }
    s += r.debris_id + "," + r.asset_id + "," + std::to_string(*r.first_conjunction_step) + "," +
         std::to_string(r.tca_step) + "," + num(r.miss_distance) + "," + std::to_string(best_t) + "," + num(best) +
         "," + (rec.engaged_count > 0 ? "true" : "false") + "\n";
  }
  return s;
}

void write_mission(Outputs& out, const Scenario& sc, const scheduler::MissionState& state,
                   std::size_t platforms) {
  const auto m = scheduler::derive_metrics(state, sc.cfg.grid.steps);
  auto mj = metrics_json(m, state);
  mj["platforms"] = platforms;
  mj["debris"] = sc.debris.size();
  mj["steps"] = sc.cfg.grid.steps;
  out.write("engagements.csv", engagements_csv(state));
  out.json_file("metrics.json", mj);
  out.write("timeline.csv", timeline_csv(m));
  out.write("conjunctions.csv", conjunctions_csv(sc, state));
}

std::string config_hash(const Scenario& sc) { return fnv1a_hex(scenario::to_json(sc.cfg).dump()); }

Scenario load(const CommandOptions& opts) { return prepare(scenario::load_scenario(opts.config), opts.overrides); }

std::vector<astro::OrbitElements> placed_elements(const Scenario& sc, const std::vector<std::size_t>& placement) {
  std::vector<astro::OrbitElements> out;
  for (std::size_t s : placement) out.push_back(sc.slots.elements[s]);
  return out;
}

formulations::EspSubproblem first_subproblem(const Scenario& sc, const std::vector<astro::OrbitElements>& platforms) {
  const auto ctx = sc.context(platforms.size(), false);
  std::vector<astro::StateVector> ps, ds;
  for (const auto& el : platforms) ps.push_back(astro::elements_to_state(el, sc.k, 0));
  for (std::size_t d = 0; d < sc.debris.size(); ++d) ds.push_back(sc.debris_states.at(d, 0));
  return formulations::build_esp_subproblem(ctx, 0, ps, sc.debris, ds, std::vector<bool>(sc.debris.size(), true));
}

}  // namespace

json metrics_json(const scheduler::Metrics& m, const scheduler::MissionState& state) {
  reward::RewardTerms sum;
  for (const auto& e : state.events) {
    sum.c0 += e.terms.c0;
    sum.c += e.terms.c;
    sum.dh += e.terms.dh;
    sum.m += e.terms.m;
  }
  json notes = json::array();
  for (const auto& n : state.notes) notes.push_back({{"step", n.step}, {"message", n.message}});
  return json{{"schema_version", 1},
              {"value", m.value},
              {"engagements", m.engagements},
              {"engaged", m.engaged},
              {"deorbited", m.deorbited},
              {"ejected", m.ejected},
              {"nudging_km", m.nudging_km},
              {"terms", {{"c0", sum.c0}, {"c", sum.c}, {"dh", sum.dh}, {"m", sum.m}}},
              {"notes", notes}};
}

std::vector<fs::path> cmd_design(const CommandOptions& opts) {
  Outputs out(opts.out_dir, "design");
  const auto sc = load(opts);
  out.json_file("config.echo.json", scenario::to_json(sc.cfg));
  const auto inst = mclp_instance(sc);
  if (opts.solver == SolverMode::ExportOnly) {
    auto local = inst;
    out.mps("mclp.mps", formulations::build_mclp_model(local).model);
  } else {
    const auto r = design(sc, inst, sc.cfg.platforms, opts.solver);
    out.write("placement.csv", placement_csv(sc, r.placement));
    out.json_file("design.json", design_json(r, sc.cfg.platforms, sc.slots.elements.size()));
  }
  return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
}

std::vector<fs::path> cmd_schedule(const CommandOptions& opts) {
  if (opts.placement.empty()) throw Error(ErrorKind::InvalidArgument, "schedule needs --placement");
  Outputs out(opts.out_dir, "schedule");
  const auto sc = load(opts);
  out.json_file("config.echo.json", scenario::to_json(sc.cfg));
  std::vector<astro::OrbitElements> platforms;
  for (const auto& o : scenario::load_orbits_csv(opts.placement)) platforms.push_back(o.elements);
  if (opts.solver == SolverMode::ExportOnly) {
    out.mps("esp_step0.mps", formulations::build_esp_model(first_subproblem(sc, platforms)).model);
  } else {
    write_mission(out, sc, schedule(sc, platforms, opts.solver), platforms.size());
  }
  return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
}

std::vector<fs::path> cmd_run(const CommandOptions& opts) {
  Outputs out(opts.out_dir, "run");
  const auto sc = load(opts);
  out.json_file("config.echo.json", scenario::to_json(sc.cfg));
  const auto inst = mclp_instance(sc);
  if (opts.solver == SolverMode::ExportOnly) {
    out.mps("mclp.mps", formulations::build_mclp_model(inst).model);
  } else {
    const auto r = design(sc, inst, sc.cfg.platforms, opts.solver);
    out.write("placement.csv", placement_csv(sc, r.placement));
    out.json_file("design.json", design_json(r, sc.cfg.platforms, sc.slots.elements.size()));
    const auto platforms = placed_elements(sc, r.placement);
    write_mission(out, sc, schedule(sc, platforms, opts.solver), platforms.size());
  }
  return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
}

std::vector<fs::path> cmd_clsp(const CommandOptions& opts) {
  Outputs out(opts.out_dir, "clsp");
  const std::string text = read_file(opts.config);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, opts.config.string() + ": " + e.what());
  }

  formulations::ClspInstance inst;
  auto encoding = formulations::ClspEncoding::Sparse;
  milp::Limits limits;
  std::string hash;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;
  if (doc.contains("layers")) {
    inst = clsp_from_json(doc);
    hash = fnv1a_hex(text);
    const std::string enc = doc.value("encoding", std::string("sparse"));
    if (enc == "dense") {
      encoding = formulations::ClspEncoding::Dense;
    } else if (enc != "sparse") {
      throw Error(ErrorKind::ValidationError, "CLSP encoding must be sparse or dense");
    }
    for (std::size_t d = 0; d < inst.debris; ++d) ids.push_back("d" + std::to_string(d));
  } else {
    auto sc = prepare(scenario::parse_scenario(doc, opts.config.parent_path()), opts.overrides);
    out.json_file("config.echo.json", scenario::to_json(sc.cfg));
    inst = formulations::build_clsp(sc.context(sc.slots.elements.size(), false), sc.debris, sc.slots.elements,
                                    sc.cfg.platforms, sc.cfg.clsp);
    limits = sc.cfg.solver.limits(milp::BoundMode::Lp);
    hash = config_hash(sc);
    seed = sc.cfg.seed;
    for (const auto& b : sc.debris) ids.push_back(b.id);
  }

  const auto model = formulations::build_clsp_model(inst, encoding);
  if (opts.solver == SolverMode::ExportOnly) {
    out.mps("clsp.mps", model.model);
    return out.finish(hash, seed, opts.solver);
  }
  milp::MilpSolution sol;
  if (opts.solver == SolverMode::Heuristic) {
    sol = milp::solve_heuristic(model.model, milp::StructureHint::Generic);
  } else {
    try {
      sol = milp::solve_exact(model.model, limits);
    } catch (const milp::LimitsExceeded& e) {
      sol = e.incumbent();
      if (sol.assignment.empty()) throw;
    }
  }
  const auto schedule = formulations::decode_clsp(inst, model, sol);
  json eng = json::array();
  for (const auto& e : schedule.engagements) {
    eng.push_back({{"step", e.step}, {"debris", ids[e.debris]}, {"engagers", e.engagers}, {"reward", e.reward}});
  }
  out.json_file("clsp.json", json{{"schema_version", 1},
                                  {"objective", sol.objective_value},
                                  {"status", milp::to_string(sol.status)},
                                  {"bound", sol.bound},
                                  {"gap", sol.gap},
                                  {"nodes", sol.nodes},
                                  {"variables", model.model.num_variables()},
                                  {"constraints", model.model.num_constraints()},
                                  {"encoding", encoding == formulations::ClspEncoding::Dense ? "dense" : "sparse"},
                                  {"tree_slots", inst.tree_size()},
                                  {"placement", schedule.placement},
                                  {"engagements", eng}});
  return out.finish(hash, seed, opts.solver);
}

std::vector<fs::path> cmd_sweep(const CommandOptions& opts) {
  Outputs out(opts.out_dir, "sweep");
  const auto sc = load(opts);
  out.json_file("config.echo.json", scenario::to_json(sc.cfg));
  auto p_values = sc.cfg.sweep_p;
  if (p_values.empty()) {
    for (std::size_t p = 1; p <= sc.cfg.platforms; ++p) p_values.push_back(p);
  }
  const auto inst = mclp_instance(sc);
  if (opts.solver == SolverMode::ExportOnly) {
    for (std::size_t p : p_values) {
      auto local = inst;
      local.platforms = p;
      out.mps("mclp_p" + std::to_string(p) + ".mps", formulations::build_mclp_model(local).model);
    }
    return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
  }
  std::string csv = "platforms,pi,status,value,engagements,engaged,deorbited,nudging_km\n";
  for (std::size_t p : p_values) {
    if (p > sc.slots.elements.size()) throw Error(ErrorKind::ValidationError, "sweep P exceeds the slot count");
    const auto r = design(sc, inst, p, opts.solver);
    const auto state = schedule(sc, placed_elements(sc, r.placement), opts.solver);
    const auto m = scheduler::derive_metrics(state, sc.cfg.grid.steps);
    csv += std::to_string(p) + "," + num(r.pi) + "," + milp::to_string(r.status) + "," + num(m.value) + "," +
           std::to_string(m.engagements) + "," + std::to_string(m.engaged) + "," + std::to_string(m.deorbited) +
           "," + num(m.nudging_km) + "\n";
  }
  out.write("sweep.csv", csv);
  return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
}

std::vector<fs::path> cmd_walker(const CommandOptions& opts) {
  Outputs out(opts.out_dir, "walker");
  const auto sc = load(opts);
  out.json_file("config.echo.json", scenario::to_json(sc.cfg));
  const auto search = walker_search(sc);
  std::string csv = "O,F,sma_km,inc_deg,score\n";
  for (const auto& e : search.evaluations) {
    csv += std::to_string(e.pattern.o_planes) + "," + std::to_string(e.pattern.f_phase) + "," + num(e.pattern.sma) +
           "," + deg(e.pattern.inc) + "," + num(e.score) + "\n";
  }
  out.write("walker.csv", csv);
  const auto& b = search.best;
  json best{{"schema_version", 1},
            {"pattern", std::to_string(b.pattern.p_total) + "/" + std::to_string(b.pattern.o_planes) + "/" +
                            std::to_string(b.pattern.f_phase)},
            {"p_total", b.pattern.p_total},
            {"o_planes", b.pattern.o_planes},
            {"f_phase", b.pattern.f_phase},
            {"sma_km", b.pattern.sma},
            {"inc_deg", b.pattern.inc / astro::kDeg},
            {"score", b.score},
            {"evaluations", search.evaluations.size()}};
  out.json_file("walker_best.json", best);
  if (opts.solver != SolverMode::ExportOnly) {
    const auto sats = baselines::generate_walker(b.pattern);
    std::string pcsv = "id,sma_km,ecc,inc_deg,raan_deg,argp_deg,anomaly_deg\n";
    for (std::size_t i = 0; i < sats.size(); ++i) {
      pcsv += "w" + std::to_string(i) + "," + num(sats[i].sma()) + "," + num(sats[i].ecc()) + "," +
              deg(sats[i].inc()) + "," + deg(sats[i].raan()) + "," + deg(sats[i].argp()) + "," +
              deg(sats[i].anomaly()) + "\n";
    }
    out.write("walker_placement.csv", pcsv);
  }
  return out.finish(config_hash(sc), sc.cfg.seed, opts.solver);
}

}  // namespace lasercon::pipeline
