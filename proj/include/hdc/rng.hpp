#pragma once

// Deterministic randomness for codebooks and experiments.
//
// Codeword sampling is counter-based: every draw is a pure function of
// (seed, symbol index, coordinate index), so individual codewords can be
// regenerated without materializing the codebook and generation order
// never matters. Gaussian draws use Box-Muller on hashed uniforms, which
// keeps results identical across platforms up to libm rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace hdc::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t key2(std::uint64_t seed, std::uint64_t a) noexcept {
  return splitmix64(splitmix64(seed) ^ a);
}

constexpr std::uint64_t key3(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(key2(seed, a) ^ b);
}

constexpr std::uint64_t key4(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                             std::uint64_t c) noexcept {
  return splitmix64(key3(seed, a, b) ^ c);
}

// Uniform in [0,1) from a hash value.
constexpr double to_unit(std::uint64_t h) noexcept {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Uniform in (0,1]; safe as a log() argument.
constexpr double to_unit_open(std::uint64_t h) noexcept {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

// Per-trial seeds for Monte-Carlo runners: results independent of scheduling.
constexpr std::uint64_t trial_seed(std::uint64_t config_seed, std::uint64_t trial) noexcept {
  return key2(config_seed, trial);
}

// ---------------------------------------------------------------------------
// Counter-based codeword entries.

// Bipolar entry for coordinate `coord` of symbol `symbol`: one hash feeds 64
// coordinates, each entry still addressable by its coordinate index.
constexpr std::int8_t bipolar_entry(std::uint64_t seed, std::uint64_t symbol,
                                    std::uint64_t coord) noexcept {
  const std::uint64_t word = key3(seed, symbol, coord >> 6);
  return ((word >> (coord & 63)) & 1) ? std::int8_t{1} : std::int8_t{-1};
}

inline void fill_bipolar(std::span<std::int8_t> out, std::uint64_t seed, std::uint64_t symbol) {
  const std::size_t d = out.size();
  std::size_t i = 0;
  for (std::uint64_t block = 0; i < d; ++block) {
    std::uint64_t word = key3(seed, symbol, block);
    for (int j = 0; j < 64 && i < d; ++j, ++i) {
      out[i] = (word & 1) ? std::int8_t{1} : std::int8_t{-1};
      word >>= 1;
    }
  }
}

// Gaussian entries, generated in Box-Muller pairs keyed by (seed, symbol, pair).
inline void fill_gaussian(std::span<double> out, std::uint64_t seed, std::uint64_t symbol,
                          double sigma) {
  const std::size_t d = out.size();
  for (std::size_t pair = 0; 2 * pair < d; ++pair) {
    const double u1 = to_unit_open(key4(seed, symbol, pair, 0));
    const double u2 = to_unit(key4(seed, symbol, pair, 1));
    const double r = sigma * std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[2 * pair] = r * std::cos(angle);
    if (2 * pair + 1 < d) out[2 * pair + 1] = r * std::sin(angle);
  }
}

// Sparse Bernoulli(p) support, sorted by construction.
inline std::vector<std::uint32_t> sparse_support(std::uint32_t d, double p, std::uint64_t seed,
                                                 std::uint64_t symbol) {
  std::vector<std::uint32_t> idx;
  idx.reserve(static_cast<std::size_t>(p * d * 1.3) + 8);
  for (std::uint32_t c = 0; c < d; ++c) {
    if (to_unit(key3(seed, symbol, c)) < p) idx.push_back(c);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// Sequential stream (shuffles, rejection sampling, noise draws).

class SplitMix {
 public:
  explicit constexpr SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  constexpr double next_unit() noexcept { return to_unit(next()); }
  constexpr double next_unit_open() noexcept { return to_unit_open(next()); }

  // Unbiased-enough bounded draw via 128-bit multiply-shift.
  constexpr std::uint64_t bounded(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
  }

  double next_gaussian() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) noexcept {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from {0, ..., n-1}, unsorted.
  std::vector<std::uint32_t> sample_distinct(std::uint32_t k, std::uint32_t n) {
    if (k > n) throw std::invalid_argument("sample_distinct: k exceeds population size");
    // Floyd's algorithm; O(k) draws and memory.
    std::vector<std::uint32_t> chosen;
    chosen.reserve(k);
    for (std::uint32_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::uint32_t>(bounded(j + 1));
      if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) {
        chosen.push_back(j);
      } else {
        chosen.push_back(t);
      }
    }
    return chosen;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Seeded permutation of {0, ..., n-1}.
inline std::vector<std::uint32_t> random_permutation(std::uint32_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  SplitMix g(seed);
  g.shuffle(perm);
  return perm;
}

}  // namespace hdc::rng
