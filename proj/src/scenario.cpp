#include "lasercon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "lasercon/error.hpp"
#include "lasercon/rng.hpp"

namespace lasercon::scenario {

using nlohmann::json;

std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count == 0) return {};
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = start + step * static_cast<double>(i);
  out.back() = stop;
  return out;
}

// ---------------------------------------------------------------------------

void SlotGrid::validate() const {
  if (altitude_km.empty() || inclination_deg.empty() || raan_deg.empty() || arg_lat_deg.empty()) {
    throw Error(ErrorKind::ValidationError, "slot grid axes must be non-empty");
  }
  for (double h : altitude_km) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::ValidationError, "slot altitudes must be positive");
  }
  for (const auto* axis : {&inclination_deg, &raan_deg, &arg_lat_deg}) {
    for (double v : *axis) {
      if (!std::isfinite(v)) throw Error(ErrorKind::ValidationError, "slot angles must be finite");
    }
  }
  for (double i : inclination_deg) {
    if (i < 0.0 || i > 180.0) throw Error(ErrorKind::ValidationError, "slot inclination outside [0, 180] deg");
  }
}

std::size_t SlotGrid::size() const {
  return altitude_km.size() * inclination_deg.size() * raan_deg.size() * arg_lat_deg.size();
}

std::vector<astro::OrbitElements> SlotGrid::elements(const astro::AstroConstants& k) const {
  validate();
  std::vector<astro::OrbitElements> out;
  out.reserve(size());
  for (double h : altitude_km) {
    for (double i : inclination_deg) {
      for (double raan : raan_deg) {
        for (double u : arg_lat_deg) {
          out.push_back(astro::OrbitElements::circular(k.r_earth + h, i * astro::kDeg, raan * astro::kDeg,
                                                       u * astro::kDeg));
        }
      }
    }
  }
  return out;
}

SlotCatalog build_slot_states(const SlotGrid& grid, const astro::TimeGrid& time_grid,
                              const astro::AstroConstants& k) {
  time_grid.validate();
  SlotCatalog cat;
  cat.elements = grid.elements(k);
  cat.states = astro::StateTable::propagate(cat.elements, time_grid, k);
  return cat;
}

void AltitudeHistogram::validate() const {
  if (bin_lo_km.empty() || bin_lo_km.size() != bin_hi_km.size() || bin_lo_km.size() != freq.size()) {
    throw Error(ErrorKind::ValidationError, "histogram needs matching, non-empty bin and frequency lists");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < freq.size(); ++b) {
    if (!(freq[b] >= 0.0) || !std::isfinite(freq[b])) {
      throw Error(ErrorKind::ValidationError, "histogram frequencies must be non-negative");
    }
    if (!(bin_lo_km[b] < bin_hi_km[b]) || !(bin_lo_km[b] > 0.0)) {
      throw Error(ErrorKind::ValidationError, "histogram bin " + std::to_string(b) + " has bad edges");
    }
    total += freq[b];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::ValidationError, "histogram frequencies sum to zero");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

struct CsvTable {
  std::filesystem::path path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  std::size_t column(const std::string& name, bool required = true) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    if (required) throw Error(ErrorKind::ParseError, path.string() + ": missing column '" + name + "'");
    return formulations::kNone;
  }

  double number(std::size_t row, std::size_t col, double fallback = 0.0) const {
    if (col == formulations::kNone) return fallback;
    const std::string& cell = rows[row][col];
    if (cell.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, path.string() + ": line " + std::to_string(lines[row]) + ": column '" +
                                             header[col] + "' is not a number: '" + cell + "'");
    }
  }
};

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  CsvTable table;
  table.path = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split_csv(t);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw Error(ErrorKind::ParseError, path.string() + ": line " + std::to_string(lineno) + ": expected " +
                                             std::to_string(table.header.size()) + " fields");
    }
    table.rows.push_back(std::move(cells));
    table.lines.push_back(lineno);
  }
  if (table.header.empty()) throw Error(ErrorKind::ParseError, path.string() + ": empty file");
  return table;
}

astro::OrbitElements row_elements(const CsvTable& t, std::size_t r) {
  return astro::OrbitElements(t.number(r, t.column("sma_km")), t.number(r, t.column("ecc")),
                              t.number(r, t.column("inc_deg")) * astro::kDeg,
                              t.number(r, t.column("raan_deg")) * astro::kDeg,
                              t.number(r, t.column("argp_deg")) * astro::kDeg,
                              t.number(r, t.column("anomaly_deg")) * astro::kDeg);
}

}  // namespace

AltitudeHistogram load_histogram_csv(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  AltitudeHistogram h;
  const auto lo = t.column("bin_lo_km"), hi = t.column("bin_hi_km"), f = t.column("freq");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    h.bin_lo_km.push_back(t.number(r, lo));
    h.bin_hi_km.push_back(t.number(r, hi));
    h.freq.push_back(t.number(r, f));
  }
  h.validate();
  return h;
}

std::vector<ablation::DebrisBody> load_debris_csv(const std::filesystem::path& path, double cross_section) {
  const auto t = read_csv(path);
  const auto id = t.column("id"), mass = t.column("mass_kg"), rho = t.column("rho_kg_m2");
  std::vector<ablation::DebrisBody> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ablation::DebrisBody b;
    b.id = t.rows[r][id];
    b.mass = t.number(r, mass);
    b.surface_density = t.number(r, rho);
    b.cross_section = cross_section;
    b.elements = row_elements(t, r);
    b.validate();
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<NamedOrbit> load_orbits_csv(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  const auto id = t.column("id");
  std::vector<NamedOrbit> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out.push_back({t.rows[r][id], row_elements(t, r)});
  return out;
}

std::vector<reward::ValuableAsset> load_assets_csv(const std::filesystem::path& path, double sphere_radius) {
  std::vector<reward::ValuableAsset> out;
  for (auto& o : load_orbits_csv(path)) out.push_back({std::move(o.id), o.elements, sphere_radius});
  return out;
}

std::vector<ablation::DebrisBody> sample_debris_field(const AltitudeHistogram& hist, std::size_t count,
                                                      std::uint64_t seed, const DebrisTemplate& tmpl,
                                                      std::uint64_t stream, const astro::AstroConstants& k) {
  std::vector<ablation::DebrisBody> out;
  if (count == 0) return out;
  hist.validate();
  std::vector<double> cdf(hist.freq.size());
  double acc = 0.0;
  for (std::size_t b = 0; b < cdf.size(); ++b) cdf[b] = (acc += hist.freq[b]);

  CounterRng rng(seed, stream);
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Six draws per object, always consumed in the same order.
    const double pick = rng.uniform() * acc;
    const double within = rng.uniform();
    const double inc = rng.uniform(0.0, 180.0);
    const double raan = rng.uniform(0.0, 360.0);
    const double argp = rng.uniform(0.0, 360.0);
    const double arg_lat = rng.uniform(0.0, 360.0);
    std::size_t b = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), pick) - cdf.begin());
    b = std::min(b, cdf.size() - 1);
    while (hist.freq[b] <= 0.0 && b > 0) --b;  // pick landed on an empty bin's edge
    const double alt = hist.bin_lo_km[b] + within * (hist.bin_hi_km[b] - hist.bin_lo_km[b]);

    ablation::DebrisBody body;
    body.id = tmpl.id_prefix + std::to_string(i);
    body.mass = tmpl.mass;
    body.surface_density = tmpl.surface_density;
    body.cross_section = tmpl.cross_section;
    // Circular orbits carry no perigee direction, so argp folds into the
    // argument of latitude position that the elements keep.
    (void)argp;
    body.elements = astro::OrbitElements::circular(k.r_earth + alt, inc * astro::kDeg, raan * astro::kDeg,
                                                   arg_lat * astro::kDeg);
    body.validate();
    out.push_back(std::move(body));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

// Strict view over one JSON object: every key must be read, and type
// problems are collected rather than thrown one by one.
class Fields {
 public:
  Fields(const json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) {
      errors_.push_back(path_ + ": expected an object");
      ok_ = false;
    }
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return ok_ && j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) {
      errors_.push_back(where(key) + ": expected a number");
      return fallback;
    }
    return v.get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      errors_.push_back(where(key) + ": expected a non-negative integer");
      return fallback;
    }
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) {
      errors_.push_back(where(key) + ": expected a string");
      return fallback;
    }
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) {
      errors_.push_back(where(key) + ": expected true or false");
      return fallback;
    }
    return v.get<bool>();
  }

  void finish() {
    if (!ok_) return;
    for (const auto& [key, _] : j_.items()) {
      if (!seen_.count(key)) errors_.push_back(where(key) + ": unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
  bool ok_ = true;
};

std::vector<double> parse_axis(const json& v, const std::string& where, std::vector<std::string>& errors) {
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) {
        errors.push_back(where + ": axis values must be numbers");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }
  Fields f(v, where, errors);
  const double start = f.number("start", 0.0);
  const double stop = f.number("stop", 0.0);
  const std::size_t count = f.count("count", 0);
  f.finish();
  if (count == 0) errors.push_back(where + ": count must be at least 1");
  return linspace(start, stop, count);
}

ablation::DebrisBody parse_inline_object(const json& v, const std::string& where, std::vector<std::string>& errors,
                                         double cross_section, bool physical = true) {
  Fields f(v, where, errors);
  ablation::DebrisBody b;
  b.id = f.text("id", "");
  const double sma = f.number("sma_km", 0.0), ecc = f.number("ecc", 0.0);
  const double inc = f.number("inc_deg", 0.0), raan = f.number("raan_deg", 0.0);
  const double argp = f.number("argp_deg", 0.0), nu = f.number("anomaly_deg", 0.0);
  b.mass = f.number("mass_kg", 0.0);
  b.surface_density = f.number("rho_kg_m2", 0.0);
  b.cross_section = f.number("cross_section_m2", cross_section);
  f.finish();
  if (b.id.empty()) errors.push_back(where + ".id: required");
  try {
    b.elements = astro::OrbitElements(sma, ecc, inc * astro::kDeg, raan * astro::kDeg, argp * astro::kDeg,
                                      nu * astro::kDeg);
    if (physical) b.validate();
  } catch (const Error& e) {
    errors.push_back(where + ": " + e.what());
  }
  return b;
}

DebrisSource parse_debris_source(const json& v, const std::string& where, std::vector<std::string>& errors) {
  Fields f(v, where, errors);
  DebrisSource src;
  const std::string kind = f.text("source", "histogram");
  src.tmpl.cross_section = f.number("cross_section_m2", 1.0);
  if (kind == "histogram") {
    src.kind = DebrisSource::Kind::Histogram;
    src.histogram_csv = f.text("histogram_csv", "");
    src.count = f.count("count", 0);
    src.tmpl.surface_density = f.number("surface_density_kg_m2", 1.0);
    src.tmpl.mass = f.number("mass_kg", 0.0);
    src.tmpl.id_prefix = f.text("id_prefix", "d");
    if (src.histogram_csv.empty()) errors.push_back(where + ".histogram_csv: required for a histogram source");
    if (!(src.tmpl.surface_density > 0.0) && !(src.tmpl.mass > 0.0)) {
      errors.push_back(where + ": sampled debris need a positive surface density or mass");
    }
  } else if (kind == "catalog") {
    src.kind = DebrisSource::Kind::Catalog;
    src.catalog_csv = f.text("catalog_csv", "");
    if (src.catalog_csv.empty()) errors.push_back(where + ".catalog_csv: required for a catalog source");
  } else if (kind == "inline") {
    src.kind = DebrisSource::Kind::Inline;
    if (f.has("objects") && f.raw("objects").is_array()) {
      std::size_t i = 0;
      for (const auto& o : f.raw("objects")) {
        src.objects.push_back(
            parse_inline_object(o, where + ".objects[" + std::to_string(i++) + "]", errors, src.tmpl.cross_section));
      }
    } else {
      errors.push_back(where + ".objects: required list for an inline source");
    }
  } else {
    errors.push_back(where + ".source: expected histogram, catalog or inline");
  }
  f.finish();
  if (!(src.tmpl.cross_section > 0.0)) errors.push_back(where + ".cross_section_m2: must be positive");
  return src;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

milp::Limits SolverConfig::limits(milp::BoundMode bound) const {
  milp::Limits l;
  l.node_cap = node_cap;
  l.time_cap = time_cap;
  l.gap_target = gap_target;
  l.objective_scale = objective_scale;
  l.bound = bound;
  return l;
}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> out;
  auto check = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      const std::string what = e.what();
      const std::string prefix = std::string(to_string(e.kind())) + ": ";
      out.push_back(what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what);
    }
  };
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  check([&] {
    if (!(grid.step_size > 0.0) || !std::isfinite(grid.step_size)) fail("time grid step_size must be positive");
  });
  check([&] {
    if (grid.steps < 2) fail("time grid needs at least 2 steps");
  });
  check([&] { laser.validate(); });
  check([&] { reward.validate(); });
  check([&] { slots.validate(); });
  check([&] {
    if (platforms > slots.size()) fail("more platforms than slots in the grid");
  });
  check([&] {
    if (g0_mclp && !(*g0_mclp > 0.0)) fail("g0_mclp must be positive");
  });
  for (const auto& [id, s] : s_td) {
    check([&] {
      if (!(s >= 1.0)) fail("s_td for '" + id + "' must be at least 1");
    });
  }
  check([&] {
    if (threads == 0) fail("threads must be at least 1");
  });
  return out;
}

void ScenarioConfig::validate() const {
  const auto problems = violations();
  if (problems.empty()) return;
  std::string msg = problems.front();
  for (std::size_t i = 1; i < problems.size(); ++i) msg += "; " + problems[i];
  throw Error(ErrorKind::ValidationError, msg);
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  std::vector<std::string> errors;
  ScenarioConfig cfg;
  cfg.base_dir = base_dir;
  const astro::AstroConstants k;
  Fields top(doc, "", errors);

  cfg.schema_version = static_cast<int>(top.count("schema_version", 1));
  if (cfg.schema_version != 1) errors.push_back("schema_version: only version 1 is supported");
  cfg.name = top.text("name", cfg.name);

  if (top.has("time_grid")) {
    Fields f(top.raw("time_grid"), "time_grid", errors);
    cfg.grid.epoch = f.text("epoch", cfg.grid.epoch);
    cfg.grid.step_size = f.number("step_size_s", cfg.grid.step_size);
    cfg.grid.steps = f.count("steps", cfg.grid.steps);
    f.finish();
  }

  if (top.has("laser")) {
    Fields f(top.raw("laser"), "laser", errors);
    auto& l = cfg.laser;
    l.d_eff = f.number("d_eff_m", l.d_eff);
    l.t_tot = f.number("t_tot", l.t_tot);
    l.b_sq = f.number("b_sq", l.b_sq);
    l.zeta = f.number("zeta", l.zeta);
    l.wavelength = f.number("wavelength_nm", l.wavelength * 1e9) * 1e-9;
    l.c_m = f.number("c_m_n_per_mw", l.c_m);
    l.eta = f.number("eta", l.eta);
    l.prf = f.number("prf_hz", l.prf);
    l.engage_duration = f.number("engage_s", l.engage_duration);
    l.cool_duration = f.number("cool_s", l.cool_duration);
    if (f.has("range_km")) {
      const auto& r = f.raw("range_km");
      if (r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number()) {
        l.u_min = r[0].get<double>();
        l.u_max = r[1].get<double>();
      } else {
        errors.push_back("laser.range_km: expected [min, max]");
      }
    }
    if (f.has("fluence")) {
      Fields m(f.raw("fluence"), "laser.fluence", errors);
      const std::string mode = m.text("mode", "constant_fluence");
      if (mode == "constant_fluence") {
        l.fluence_mode = ablation::ConstantFluence{m.number("phi_j_m2", 8500.0)};
      } else if (mode == "constant_energy") {
        l.fluence_mode = ablation::ConstantEnergy{m.number("pulse_energy_j", 300.0)};
      } else {
        errors.push_back("laser.fluence.mode: expected constant_fluence or constant_energy");
      }
      m.finish();
    }
    f.finish();
  }

  if (top.has("access")) {
    Fields f(top.raw("access"), "access", errors);
    cfg.epsilon = f.number("epsilon_km", cfg.epsilon);
    f.finish();
  }

  if (top.has("reward")) {
    Fields f(top.raw("reward"), "reward", errors);
    auto& r = cfg.reward;
    r.alpha = f.number("alpha", r.alpha);
    r.beta = f.number("beta", r.beta);
    r.g0 = f.number("g0", r.g0);
    r.g = f.number("g", r.g);
    r.g_h = f.number("g_h", r.g_h);
    r.h_star = k.r_earth + f.number("perigee_threshold_km", r.h_star - k.r_earth);
    r.tau_lookahead = f.count("tau_lookahead", r.tau_lookahead);
    r.m_max = f.number("m_max_kg", r.m_max);
    if (f.has("g0_mclp")) cfg.g0_mclp = f.number("g0_mclp", 0.0);
    if (f.has("window")) {
      const auto& w = f.raw("window");
      if (w.is_array() && w.size() == 2 && w[0].is_number_unsigned() && w[1].is_number_unsigned()) {
        r.window = reward::Window{w[0].get<std::size_t>(), w[1].get<std::size_t>()};
      } else {
        errors.push_back("reward.window: expected [t_min, t_max] step indices");
      }
    }
    f.finish();
  }

  if (top.has("slot_grid")) {
    Fields f(top.raw("slot_grid"), "slot_grid", errors);
    auto axis = [&](const char* key, std::vector<double>& out) {
      if (f.has(key)) out = parse_axis(f.raw(key), std::string("slot_grid.") + key, errors);
    };
    axis("altitude_km", cfg.slots.altitude_km);
    axis("inclination_deg", cfg.slots.inclination_deg);
    axis("raan_deg", cfg.slots.raan_deg);
    axis("arg_lat_deg", cfg.slots.arg_lat_deg);
    f.finish();
  } else {
    errors.push_back("slot_grid: required");
  }

  if (top.has("debris")) {
    const auto& d = top.raw("debris");
    if (d.is_array()) {
      for (std::size_t i = 0; i < d.size(); ++i) {
        cfg.debris.push_back(parse_debris_source(d[i], "debris[" + std::to_string(i) + "]", errors));
      }
    } else {
      cfg.debris.push_back(parse_debris_source(d, "debris[0]", errors));
    }
  }

  if (top.has("assets")) {
    Fields f(top.raw("assets"), "assets", errors);
    cfg.assets.sphere_radius = f.number("sphere_radius_km", cfg.assets.sphere_radius);
    cfg.assets.catalog_csv = f.text("catalog_csv", "");
    if (f.has("objects")) {
      const auto& objs = f.raw("objects");
      if (!objs.is_array()) {
        errors.push_back("assets.objects: expected a list");
      } else {
        for (std::size_t i = 0; i < objs.size(); ++i) {
          const auto body = parse_inline_object(objs[i], "assets.objects[" + std::to_string(i) + "]", errors, 1.0, false);
          cfg.assets.objects.push_back({body.id, body.elements, cfg.assets.sphere_radius});
        }
      }
    }
    f.finish();
    if (!(cfg.assets.sphere_radius > 0.0)) errors.push_back("assets.sphere_radius_km: must be positive");
  }

  cfg.platforms = top.count("platforms", cfg.platforms);
  if (top.has("seed")) {
    const auto& s = top.raw("seed");
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else {
      errors.push_back("seed: expected a non-negative integer");
    }
  }

  if (top.has("solver")) {
    Fields f(top.raw("solver"), "solver", errors);
    auto& s = cfg.solver;
    s.node_cap = f.count("node_cap", s.node_cap);
    s.time_cap = f.number("time_cap_s", s.time_cap);
    s.gap_target = f.number("gap_target", s.gap_target);
    s.objective_scale = f.number("objective_scale", s.objective_scale);
    s.esp_exact_max_candidates = f.count("esp_exact_max_candidates", s.esp_exact_max_candidates);
    const std::string bound = f.text("mclp_bound", s.mclp_bound == milp::BoundMode::Lp ? "lp" : "combinatorial");
    if (bound == "lp") {
      s.mclp_bound = milp::BoundMode::Lp;
    } else if (bound == "combinatorial") {
      s.mclp_bound = milp::BoundMode::Combinatorial;
    } else {
      errors.push_back("solver.mclp_bound: expected lp or combinatorial");
    }
    f.finish();
    if (!(s.time_cap > 0.0)) errors.push_back("solver.time_cap_s: must be positive");
    if (s.gap_target < 0.0) errors.push_back("solver.gap_target: must be non-negative");
  }

  if (top.has("engager_cap")) cfg.engager_cap = top.count("engager_cap", 0);
  cfg.wprime_design = top.flag("wprime_design", cfg.wprime_design);
  cfg.wprime_scheduling = top.flag("wprime_scheduling", cfg.wprime_scheduling);

  if (top.has("s_td")) {
    const auto& s = top.raw("s_td");
    if (!s.is_object()) {
      errors.push_back("s_td: expected an object of debris id to threshold");
    } else {
      for (const auto& [id, v] : s.items()) {
        if (v.is_number()) {
          cfg.s_td[id] = v.get<double>();
        } else {
          errors.push_back("s_td." + id + ": expected a number");
        }
      }
    }
  }

  if (top.has("walker")) {
    Fields f(top.raw("walker"), "walker", errors);
    cfg.walker.pairs = f.count("pairs", cfg.walker.pairs);
    if (f.has("patterns")) {
      const auto& p = f.raw("patterns");
      bool good = p.is_array();
      if (good) {
        for (const auto& e : p) {
          if (!(e.is_array() && e.size() == 2 && e[0].is_number_unsigned() && e[1].is_number_unsigned())) {
            good = false;
            break;
          }
          cfg.walker.patterns.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
        }
      }
      if (!good) errors.push_back("walker.patterns: expected a list of [O, F] pairs");
    }
    f.finish();
    if (cfg.walker.pairs == 0) errors.push_back("walker.pairs: must be at least 1");
  }

  if (top.has("sweep")) {
    Fields f(top.raw("sweep"), "sweep", errors);
    if (f.has("p_values")) {
      const auto& p = f.raw("p_values");
      if (p.is_array() && std::all_of(p.begin(), p.end(), [](const json& e) { return e.is_number_unsigned(); })) {
        for (const auto& e : p) cfg.sweep_p.push_back(e.get<std::size_t>());
      } else {
        errors.push_back("sweep.p_values: expected a list of platform counts");
      }
    }
    f.finish();
  }

  if (top.has("clsp")) {
    Fields f(top.raw("clsp"), "clsp", errors);
    cfg.clsp.max_tree_slots = f.count("max_tree_slots", cfg.clsp.max_tree_slots);
    cfg.clsp.max_cells = f.count("max_cells", cfg.clsp.max_cells);
    f.finish();
  }

  cfg.threads = static_cast<unsigned>(top.count("threads", cfg.threads));
  cfg.memory_limit_mb = top.count("memory_limit_mb", cfg.memory_limit_mb);
  top.finish();

  if (errors.empty()) {
    for (auto& v : cfg.violations()) errors.push_back(std::move(v));
  }
  if (!errors.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(ErrorKind::ValidationError, msg);
  }
  return cfg;
}

ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  return parse_scenario(doc, base_dir);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

namespace {

// Values that went through a unit conversion come back with a stray ulp;
// fifteen digits recovers any decimal the user could have typed.
double converted(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

json object_json(const std::string& id, const astro::OrbitElements& el) {
  return json{{"id", id},
              {"sma_km", el.sma()},
              {"ecc", el.ecc()},
              {"inc_deg", converted(el.inc() / astro::kDeg)},
              {"raan_deg", converted(el.raan() / astro::kDeg)},
              {"argp_deg", converted(el.argp() / astro::kDeg)},
              {"anomaly_deg", converted(el.anomaly() / astro::kDeg)}};
}

}  // namespace

json to_json(const ScenarioConfig& cfg) {
  const astro::AstroConstants k;
  json j;
  j["schema_version"] = cfg.schema_version;
  j["name"] = cfg.name;
  j["time_grid"] = {{"epoch", cfg.grid.epoch}, {"step_size_s", cfg.grid.step_size}, {"steps", cfg.grid.steps}};

  const auto& l = cfg.laser;
  json fluence;
  if (const auto* cf = std::get_if<ablation::ConstantFluence>(&l.fluence_mode)) {
    fluence = {{"mode", "constant_fluence"}, {"phi_j_m2", cf->phi_opt}};
  } else {
    fluence = {{"mode", "constant_energy"},
               {"pulse_energy_j", std::get<ablation::ConstantEnergy>(l.fluence_mode).pulse_energy}};
  }
  j["laser"] = {{"d_eff_m", l.d_eff},       {"t_tot", l.t_tot},
                {"b_sq", l.b_sq},           {"zeta", l.zeta},
                {"wavelength_nm", converted(l.wavelength * 1e9)},
                {"c_m_n_per_mw", l.c_m},    {"eta", l.eta},
                {"prf_hz", l.prf},          {"engage_s", l.engage_duration},
                {"cool_s", l.cool_duration}, {"range_km", {l.u_min, l.u_max}},
                {"fluence", fluence}};
  j["access"] = {{"epsilon_km", cfg.epsilon}};

  const auto& r = cfg.reward;
  j["reward"] = {{"alpha", r.alpha},
                 {"beta", r.beta},
                 {"g0", r.g0},
                 {"g", r.g},
                 {"g_h", r.g_h},
                 {"perigee_threshold_km", converted(r.h_star - k.r_earth)},
                 {"tau_lookahead", r.tau_lookahead},
                 {"m_max_kg", r.m_max},
                 {"g0_mclp", cfg.g0_mclp ? json(*cfg.g0_mclp) : json(nullptr)},
                 {"window", r.window ? json::array({r.window->t_min, r.window->t_max}) : json(nullptr)}};

  j["slot_grid"] = {{"altitude_km", cfg.slots.altitude_km},
                    {"inclination_deg", cfg.slots.inclination_deg},
                    {"raan_deg", cfg.slots.raan_deg},
                    {"arg_lat_deg", cfg.slots.arg_lat_deg}};

  json debris = json::array();
  for (const auto& src : cfg.debris) {
    json s;
    s["cross_section_m2"] = src.tmpl.cross_section;
    switch (src.kind) {
      case DebrisSource::Kind::Histogram:
        s["source"] = "histogram";
        s["histogram_csv"] = src.histogram_csv;
        s["count"] = src.count;
        s["surface_density_kg_m2"] = src.tmpl.surface_density;
        s["mass_kg"] = src.tmpl.mass;
        s["id_prefix"] = src.tmpl.id_prefix;
        break;
      case DebrisSource::Kind::Catalog:
        s["source"] = "catalog";
        s["catalog_csv"] = src.catalog_csv;
        break;
      case DebrisSource::Kind::Inline: {
        s["source"] = "inline";
        json objs = json::array();
        for (const auto& b : src.objects) {
          auto o = object_json(b.id, b.elements);
          o["mass_kg"] = b.mass;
          o["rho_kg_m2"] = b.surface_density;
          o["cross_section_m2"] = b.cross_section;
          objs.push_back(std::move(o));
        }
        s["objects"] = std::move(objs);
        break;
      }
    }
    debris.push_back(std::move(s));
  }
  j["debris"] = std::move(debris);

  json assets = json::array();
  for (const auto& a : cfg.assets.objects) assets.push_back(object_json(a.id, a.elements));
  j["assets"] = {{"catalog_csv", cfg.assets.catalog_csv},
                 {"objects", assets},
                 {"sphere_radius_km", cfg.assets.sphere_radius}};

  j["platforms"] = cfg.platforms;
  j["seed"] = cfg.seed;
  const auto& s = cfg.solver;
  j["solver"] = {{"node_cap", s.node_cap},
                 {"time_cap_s", s.time_cap},
                 {"gap_target", s.gap_target},
                 {"objective_scale", s.objective_scale},
                 {"esp_exact_max_candidates", s.esp_exact_max_candidates},
                 {"mclp_bound", s.mclp_bound == milp::BoundMode::Lp ? "lp" : "combinatorial"}};
  j["engager_cap"] = cfg.engager_cap ? json(*cfg.engager_cap) : json(nullptr);
  j["wprime_design"] = cfg.wprime_design;
  j["wprime_scheduling"] = cfg.wprime_scheduling;
  j["s_td"] = cfg.s_td;
  json patterns = json::array();
  for (const auto& p : cfg.walker.patterns) patterns.push_back({p.o_planes, p.f_phase});
  j["walker"] = {{"pairs", cfg.walker.pairs}, {"patterns", patterns}};
  j["sweep"] = {{"p_values", cfg.sweep_p}};
  j["clsp"] = {{"max_tree_slots", cfg.clsp.max_tree_slots}, {"max_cells", cfg.clsp.max_cells}};
  j["threads"] = cfg.threads;
  j["memory_limit_mb"] = cfg.memory_limit_mb;
  return j;
}

std::vector<ablation::DebrisBody> materialize_debris(const ScenarioConfig& cfg, const astro::AstroConstants& k) {
  std::vector<ablation::DebrisBody> out;
  for (std::size_t i = 0; i < cfg.debris.size(); ++i) {
    const auto& src = cfg.debris[i];
    std::vector<ablation::DebrisBody> part;
    switch (src.kind) {
      case DebrisSource::Kind::Histogram:
        part = sample_debris_field(load_histogram_csv(cfg.base_dir / src.histogram_csv), src.count, cfg.seed,
                                   src.tmpl, i, k);
        break;
      case DebrisSource::Kind::Catalog:
        part = load_debris_csv(cfg.base_dir / src.catalog_csv, src.tmpl.cross_section);
        break;
      case DebrisSource::Kind::Inline:
        part = src.objects;
        break;
    }
    out.insert(out.end(), part.begin(), part.end());
  }
  std::set<std::string> ids;
  for (const auto& b : out) {
    if (!ids.insert(b.id).second) throw Error(ErrorKind::ValidationError, "duplicate debris id '" + b.id + "'");
  }
  return out;
}

std::vector<reward::ValuableAsset> materialize_assets(const ScenarioConfig& cfg) {
  std::vector<reward::ValuableAsset> out;
  if (!cfg.assets.catalog_csv.empty()) {
    out = load_assets_csv(cfg.base_dir / cfg.assets.catalog_csv, cfg.assets.sphere_radius);
  }
  for (auto a : cfg.assets.objects) {
    a.sphere_radius = cfg.assets.sphere_radius;
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace lasercon::scenario
