#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lasercon/astro.hpp"

namespace lasercon::baselines {

/// Walker-Delta P/O/F pattern on a circular shell.
struct WalkerPattern {
  std::size_t p_total = 1;
  std::size_t o_planes = 1;
  std::size_t f_phase = 0;
  double sma = 7000.0;  // km
  double inc = 0.0;     // rad

  void validate() const;
  friend bool operator==(const WalkerPattern&, const WalkerPattern&) = default;
};

/// Satellites ordered plane by plane. Plane k has RAAN 360k/O; satellite j in
/// it sits at argument of latitude 360j/(P/O) + 360Fk/P.
std::vector<astro::OrbitElements> generate_walker(const WalkerPattern& pattern);

struct PhasePair {
  std::size_t o_planes = 1;
  std::size_t f_phase = 0;
  friend bool operator==(const PhasePair&, const PhasePair&) = default;
};

/// Every (O, F) with O dividing P and 0 <= F < O, ordered by O then F.
std::vector<PhasePair> enumerate_patterns(std::size_t p_total);

struct ShellPair {
  double sma = 0.0;  // km
  double inc = 0.0;  // rad
};

/// Draws `count` distinct (sma, inc) pairs from the given axis values; the
/// whole product is returned when it has no more than `count` entries.
std::vector<ShellPair> sample_shell_pairs(std::span<const double> sma_values,
                                          std::span<const double> inc_values, std::size_t count,
                                          std::uint64_t seed);

struct WalkerEvaluation {
  WalkerPattern pattern;
  double score = 0.0;
};

/// Constellation-configuration reward of a fixed set of satellites.
using PlacementScorer = std::function<double(std::span<const astro::OrbitElements>)>;

struct WalkerSearch {
  std::vector<WalkerEvaluation> evaluations;  // pair-major, then pattern order
  WalkerEvaluation best;
};

/// Scores every pattern on every pair. The best has the highest score; ties go
/// to lower sma, then inc, then O, then F. The scorer must be thread-safe when
/// threads > 1.
WalkerSearch best_walker(std::size_t p_total, std::span<const ShellPair> pairs,
                         std::span<const PhasePair> patterns, const PlacementScorer& scorer,
                         unsigned threads = 1);

}  // namespace lasercon::baselines
