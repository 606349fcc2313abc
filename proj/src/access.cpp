#include "lasercon/access.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include "lasercon/error.hpp"

namespace lasercon::access {

FeasibilityTensor::FeasibilityTensor(std::size_t steps, std::size_t slots, std::size_t debris,
                                     TensorVariant variant)
    : steps_(steps),
      slots_(slots),
      debris_(debris),
      variant_(variant),
      words_per_slab_((slots * debris + 63) / 64),
      words_(steps * words_per_slab_, 0) {}

void FeasibilityTensor::set(std::size_t t, std::size_t s, std::size_t d, bool value) {
  const std::size_t bit = index(s, d);
  std::uint64_t& word = words_[t * words_per_slab_ + bit / 64];
  const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
  word = value ? (word | mask) : (word & ~mask);
}

std::size_t FeasibilityTensor::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool FeasibilityTensor::subset_of(const FeasibilityTensor& other) const {
  if (steps_ != other.steps_ || slots_ != other.slots_ || debris_ != other.debris_) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

namespace {

constexpr char kMagic[4] = {'L', 'C', 'W', 'T'};

template <typename T>
void write_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T read_le(std::istream& in) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    if (c == EOF) throw Error(ErrorKind::IoFailure, "truncated feasibility tensor cache");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

void FeasibilityTensor::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kFormatVersion);
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(variant_));
  write_le<std::uint64_t>(out, steps_);
  write_le<std::uint64_t>(out, slots_);
  write_le<std::uint64_t>(out, debris_);
  for (std::uint64_t w : words_) write_le<std::uint64_t>(out, w);
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path.string());
}

FeasibilityTensor FeasibilityTensor::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || !std::equal(magic, magic + 4, kMagic)) {
    throw Error(ErrorKind::ParseError, path.string() + " is not a feasibility tensor cache");
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw Error(ErrorKind::ParseError, "unsupported tensor cache version " + std::to_string(version));
  }
  const auto variant = read_le<std::uint8_t>(in);
  if (variant > 1) throw Error(ErrorKind::ParseError, "unknown tensor variant");
  const auto steps = read_le<std::uint64_t>(in);
  const auto slots = read_le<std::uint64_t>(in);
  const auto debris = read_le<std::uint64_t>(in);
  FeasibilityTensor tensor(steps, slots, debris, static_cast<TensorVariant>(variant));
  for (std::uint64_t& w : tensor.words_) w = read_le<std::uint64_t>(in);
  return tensor;
}

double los_indicator(double r_s, double r_d, double u_sd, const AccessParams& params,
                     const astro::AstroConstants& k) {
  const double shell = k.r_earth + params.epsilon;
  if (!(r_s > shell) || !(r_d > shell)) {
    throw Error(ErrorKind::BelowShell, "object inside the occlusion shell");
  }
  return std::sqrt(r_s * r_s - shell * shell) + std::sqrt(r_d * r_d - shell * shell) - u_sd;
}

bool engagement_feasible(const astro::StateVector& platform, const astro::StateVector& debris,
                         const AccessParams& params, const astro::AstroConstants& k) {
  const double shell = k.r_earth + params.epsilon;
  const double r_s = norm(platform.r);
  const double r_d = norm(debris.r);
  if (!(r_s > shell) || !(r_d > shell)) return false;
  const double u = norm(debris.r - platform.r);
  if (u < params.u_min || u > params.u_max) return false;
  return los_indicator(r_s, r_d, u, params, k) > 0.0;
}

namespace {

void for_each_step(std::size_t steps, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(steps, 1))));
  if (threads == 1) {
    for (std::size_t t = 0; t < steps; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < steps; t += threads) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

FeasibilityTensor build_w(const astro::StateTable& platform_states,
                          const astro::StateTable& debris_states, const AccessParams& params,
                          const astro::AstroConstants& k, unsigned threads) {
  if (platform_states.steps() != debris_states.steps()) {
    throw Error(ErrorKind::InvalidArgument, "platform and debris state tables differ in length");
  }
  FeasibilityTensor w(platform_states.steps(), platform_states.objects(), debris_states.objects(),
                      TensorVariant::W);
  for_each_step(w.steps(), threads, [&](std::size_t t) {
    for (std::size_t s = 0; s < w.slots(); ++s) {
      for (std::size_t d = 0; d < w.debris(); ++d) {
        if (engagement_feasible(platform_states.at(s, t), debris_states.at(d, t), params, k)) {
          w.set(t, s, d, true);
        }
      }
    }
  });
  return w;
}

double solo_periapsis_after(const ablation::LaserSpec& spec, const ablation::DebrisBody& body,
                            const astro::StateVector& platform, const astro::StateVector& debris,
                            const astro::AstroConstants& k) {
  const ablation::DeltaV dv = ablation::engagement_dv(spec, body, platform, debris);
  return astro::periapsis_radius(ablation::apply_engagement(debris, dv), k);
}

FeasibilityTensor build_w_prime(const FeasibilityTensor& w, const astro::StateTable& platform_states,
                                const astro::StateTable& debris_states,
                                std::span<const ablation::DebrisBody> bodies,
                                const ablation::LaserSpec& spec, const astro::AstroConstants& k,
                                unsigned threads) {
  if (bodies.size() != w.debris()) {
    throw Error(ErrorKind::InvalidArgument, "debris body count does not match tensor");
  }
  FeasibilityTensor wp(w.steps(), w.slots(), w.debris(), TensorVariant::WPrime);
  for_each_step(w.steps(), threads, [&](std::size_t t) {
    for (std::size_t d = 0; d < w.debris(); ++d) {
      const astro::StateVector& ds = debris_states.at(d, t);
      const double h_before = astro::periapsis_radius(ds, k);
      for (std::size_t s = 0; s < w.slots(); ++s) {
        if (!w.get(t, s, d)) continue;
        const double h_after = solo_periapsis_after(spec, bodies[d], platform_states.at(s, t), ds, k);
        if (h_after <= h_before) wp.set(t, s, d, true);
      }
    }
  });
  return wp;
}

std::size_t default_engager_cap(std::size_t slots, std::size_t debris) {
  return slots * debris <= 100 ? kUnlimitedCap : 3;
}

namespace {

void combinations(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<CandidateSlot> enumerate_candidate_slots(const ablation::DebrisBody& debris,
                                                     const astro::StateVector& debris_state,
                                                     std::span<const Engager> feasible_engagers,
                                                     std::size_t cap,
                                                     const ablation::LaserSpec& spec,
                                                     const astro::AstroConstants& k) {
  std::vector<Engager> engagers(feasible_engagers.begin(), feasible_engagers.end());
  std::sort(engagers.begin(), engagers.end(),
            [](const Engager& a, const Engager& b) { return a.id < b.id; });

  std::vector<CandidateSlot> out;
  CandidateSlot stay;
  stay.debris_id = debris.id;
  stay.step = debris_state.epoch_step;
  stay.resulting_state = debris_state;
  stay.resulting_periapsis = astro::periapsis_radius(debris_state, k);
  out.push_back(stay);

  std::vector<ablation::DeltaV> solo;
  solo.reserve(engagers.size());
  for (const Engager& e : engagers) solo.push_back(ablation::engagement_dv(spec, debris, e.state, debris_state));

  const std::size_t max_k = std::min(cap, engagers.size());
  for (std::size_t size = 1; size <= max_k; ++size) {
    combinations(engagers.size(), size, [&](const std::vector<std::size_t>& pick) {
      CandidateSlot slot;
      slot.debris_id = debris.id;
      slot.step = debris_state.epoch_step;
      std::vector<ablation::DeltaV> parts;
      parts.reserve(pick.size());
      for (std::size_t i : pick) {
        slot.engager_set.push_back(engagers[i].id);
        parts.push_back(solo[i]);
      }
      slot.dv = ablation::compose_dva(parts);
      slot.resulting_state = ablation::apply_engagement(debris_state, slot.dv);
      slot.resulting_periapsis = astro::periapsis_radius(slot.resulting_state, k);
      slot.hyperbolic = astro::specific_energy(slot.resulting_state, k) >= 0.0;
      out.push_back(std::move(slot));
    });
  }
  return out;
}

}  // namespace lasercon::access
