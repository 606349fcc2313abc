#include "lasercon/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "lasercon/error.hpp"
#include "lasercon/rng.hpp"

namespace lasercon::baselines {

void WalkerPattern::validate() const {
  if (p_total == 0) throw Error(ErrorKind::InvalidArgument, "walker pattern needs at least one satellite");
  if (o_planes == 0 || p_total % o_planes != 0) {
    throw Error(ErrorKind::InvalidArgument, "plane count must divide the satellite count");
  }
  if (f_phase >= o_planes) throw Error(ErrorKind::InvalidArgument, "phasing factor must be below the plane count");
  if (!(sma > 0.0) || !std::isfinite(inc)) throw Error(ErrorKind::InvalidArgument, "invalid walker shell");
}

std::vector<astro::OrbitElements> generate_walker(const WalkerPattern& pattern) {
  pattern.validate();
  const std::size_t per_plane = pattern.p_total / pattern.o_planes;
  const double P = static_cast<double>(pattern.p_total);
  std::vector<astro::OrbitElements> out;
  out.reserve(pattern.p_total);
  for (std::size_t k = 0; k < pattern.o_planes; ++k) {
    const double raan_deg = 360.0 * static_cast<double>(k) / static_cast<double>(pattern.o_planes);
    for (std::size_t j = 0; j < per_plane; ++j) {
      double u_deg = 360.0 * static_cast<double>(j) / static_cast<double>(per_plane) +
                     360.0 * static_cast<double>(pattern.f_phase * k) / P;
      u_deg = std::fmod(u_deg, 360.0);
      out.push_back(astro::OrbitElements::circular(pattern.sma, pattern.inc, raan_deg * astro::kDeg,
                                                   u_deg * astro::kDeg));
    }
  }
  return out;
}

std::vector<PhasePair> enumerate_patterns(std::size_t p_total) {
  if (p_total == 0) throw Error(ErrorKind::InvalidArgument, "p_total must be at least 1");
  std::vector<PhasePair> out;
  for (std::size_t o = 1; o <= p_total; ++o) {
    if (p_total % o != 0) continue;
    for (std::size_t f = 0; f < o; ++f) out.push_back({o, f});
  }
  return out;
}

std::vector<ShellPair> sample_shell_pairs(std::span<const double> sma_values,
                                          std::span<const double> inc_values, std::size_t count,
                                          std::uint64_t seed) {
  std::vector<ShellPair> all;
  for (double a : sma_values) {
    for (double i : inc_values) all.push_back({a, i});
  }
  if (all.size() <= count) return all;
  // Partial Fisher-Yates on the index list.
  CounterRng rng(seed, 0x57414C4BULL);
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<ShellPair> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(all[idx[i]]);
  return out;
}

namespace {

bool better(const WalkerEvaluation& a, const WalkerEvaluation& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.pattern.sma != b.pattern.sma) return a.pattern.sma < b.pattern.sma;
  if (a.pattern.inc != b.pattern.inc) return a.pattern.inc < b.pattern.inc;
  if (a.pattern.o_planes != b.pattern.o_planes) return a.pattern.o_planes < b.pattern.o_planes;
  return a.pattern.f_phase < b.pattern.f_phase;
}

}  // namespace

WalkerSearch best_walker(std::size_t p_total, std::span<const ShellPair> pairs,
                         std::span<const PhasePair> patterns, const PlacementScorer& scorer,
                         unsigned threads) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "walker search needs at least one shell pair");
  if (patterns.empty()) throw Error(ErrorKind::InvalidArgument, "walker search needs at least one pattern");
  WalkerSearch search;
  for (const auto& pair : pairs) {
    for (const auto& pp : patterns) {
      WalkerPattern pat{p_total, pp.o_planes, pp.f_phase, pair.sma, pair.inc};
      pat.validate();
      search.evaluations.push_back({pat, 0.0});
    }
  }
  auto& evals = search.evaluations;
  std::vector<std::exception_ptr> errors(evals.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < evals.size(); i += stride) {
      try {
        const auto sats = generate_walker(evals[i].pattern);
        evals[i].score = scorer(sats);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, evals.size());
  if (n_threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(work, w, n_threads);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  search.best = evals.front();
  for (const auto& e : evals) {
    if (better(e, search.best)) search.best = e;
  }
  return search;
}

}  // namespace lasercon::baselines
