#pragma once

// Random codebooks: the map from alphabet symbols to sampled hypervectors,
// their incoherence statistics, and dimension sizing for decoding targets.
//
// Sampling is counter-based (see rng.hpp): regeneration with the same
// (kind, m, d, seed, params) is bit-identical, and generating any single
// codeword is independent of the others.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hdc/hypervector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

enum class CodebookKind { DenseBipolar, Gaussian, SparseBinary };

inline const char* codebook_kind_name(CodebookKind k) {
  switch (k) {
    case CodebookKind::DenseBipolar: return "bipolar";
    case CodebookKind::Gaussian: return "gaussian";
    case CodebookKind::SparseBinary: return "sparse";
  }
  return "?";
}

struct CodebookParams {
  CodebookKind kind = CodebookKind::DenseBipolar;
  std::uint32_t m = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;
  double sigma = 1.0;        // Gaussian std-dev
  double density = 0.0;      // SparseBinary coordinate probability p
  bool fixed_weight = false; // SparseBinary variant: exactly round(p*d) ones per row
};

class Codebook {
 public:
  static Codebook generate(const CodebookParams& p) {
    if (p.m < 1 || p.d < 1) throw std::invalid_argument("codebook: m and d must be >= 1");
    Codebook cb;
    cb.params_ = p;
    cb.vectors_.reserve(p.m);
    switch (p.kind) {
      case CodebookKind::DenseBipolar:
        for (std::uint32_t a = 0; a < p.m; ++a) {
          std::vector<std::int8_t> v(p.d);
          rng::fill_bipolar(v, p.seed, a);
          cb.vectors_.push_back(Hypervector::bipolar(std::move(v)));
        }
        break;
      case CodebookKind::Gaussian:
        if (!(p.sigma > 0)) throw std::invalid_argument("codebook: sigma must be > 0");
        for (std::uint32_t a = 0; a < p.m; ++a) {
          std::vector<double> v(p.d);
          rng::fill_gaussian(v, p.seed, a, p.sigma);
          cb.vectors_.push_back(Hypervector::real(std::move(v)));
        }
        break;
      case CodebookKind::SparseBinary: {
        if (!(p.density > 0 && p.density < 1)) {
          throw std::invalid_argument("codebook: sparse density must be in (0,1)");
        }
        if (p.fixed_weight) {
          const auto w = std::max<std::uint32_t>(
              1, static_cast<std::uint32_t>(std::lround(p.density * p.d)));
          for (std::uint32_t a = 0; a < p.m; ++a) {
            rng::SplitMix g(rng::key2(p.seed, a));
            auto idx = g.sample_distinct(w, p.d);
            std::sort(idx.begin(), idx.end());
            cb.vectors_.push_back(Hypervector::sparse(p.d, std::move(idx)));
          }
        } else {
          for (std::uint32_t a = 0; a < p.m; ++a) {
            cb.vectors_.push_back(
                Hypervector::sparse(p.d, rng::sparse_support(p.d, p.density, p.seed, a)));
          }
        }
        break;
      }
    }
    cb.compute_norms();
    cb.identity_ = cb.param_hash();
    return cb;
  }

  static Codebook generate(CodebookKind kind, std::uint32_t m, std::uint32_t d,
                           std::uint64_t seed) {
    CodebookParams p;
    p.kind = kind;
    p.m = m;
    p.d = d;
    p.seed = seed;
    return generate(p);
  }

  // Wrap externally constructed codewords (level codebooks, test fixtures,
  // deserialized containers). Identity is a content hash unless the caller
  // restores a saved one.
  static Codebook from_vectors(CodebookKind kind, std::uint64_t seed,
                               std::vector<Hypervector> vectors,
                               std::optional<std::uint64_t> identity = std::nullopt) {
    if (vectors.empty()) throw std::invalid_argument("codebook: no vectors");
    const std::uint32_t d = vectors.front().dim();
    for (const auto& v : vectors) {
      if (v.dim() != d) throw std::invalid_argument("codebook: inconsistent dimensions");
    }
    Codebook cb;
    cb.params_.kind = kind;
    cb.params_.m = static_cast<std::uint32_t>(vectors.size());
    cb.params_.d = d;
    cb.params_.seed = seed;
    cb.vectors_ = std::move(vectors);
    cb.compute_norms();
    cb.identity_ = identity ? *identity : cb.content_hash();
    return cb;
  }

  Codebook(const Codebook& o)
      : params_(o.params_),
        vectors_(o.vectors_),
        min_norm_(o.min_norm_),
        max_norm_(o.max_norm_),
        identity_(o.identity_) {
    mu_cache_.store(o.mu_cache_.load(std::memory_order_relaxed), std::memory_order_relaxed);
  }
  Codebook(Codebook&& o) noexcept
      : params_(o.params_),
        vectors_(std::move(o.vectors_)),
        min_norm_(o.min_norm_),
        max_norm_(o.max_norm_),
        identity_(o.identity_) {
    mu_cache_.store(o.mu_cache_.load(std::memory_order_relaxed), std::memory_order_relaxed);
  }
  Codebook& operator=(const Codebook& o) {
    if (this != &o) {
      params_ = o.params_;
      vectors_ = o.vectors_;
      min_norm_ = o.min_norm_;
      max_norm_ = o.max_norm_;
      identity_ = o.identity_;
      mu_cache_.store(o.mu_cache_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    }
    return *this;
  }
  Codebook& operator=(Codebook&& o) noexcept {
    params_ = o.params_;
    vectors_ = std::move(o.vectors_);
    min_norm_ = o.min_norm_;
    max_norm_ = o.max_norm_;
    identity_ = o.identity_;
    mu_cache_.store(o.mu_cache_.load(std::memory_order_relaxed), std::memory_order_relaxed);
    return *this;
  }

  const CodebookParams& params() const noexcept { return params_; }
  CodebookKind kind() const noexcept { return params_.kind; }
  std::uint32_t m() const noexcept { return params_.m; }
  std::uint32_t d() const noexcept { return params_.d; }
  std::uint64_t seed() const noexcept { return params_.seed; }
  const Hypervector& codeword(std::uint32_t a) const { return vectors_.at(a); }
  const std::vector<Hypervector>& vectors() const noexcept { return vectors_; }

  // L = min codeword norm, L_max = max, kappa = L^2 / L_max^2.
  double min_norm() const noexcept { return min_norm_; }
  double max_norm() const noexcept { return max_norm_; }
  double min_norm_sq() const noexcept { return min_norm_ * min_norm_; }
  double kappa() const noexcept {
    return (min_norm_ * min_norm_) / (max_norm_ * max_norm_);
  }

  // Empirical incoherence: max over distinct pairs of |<phi(a), phi(a')>| / L^2.
  // Brute force over all m(m-1)/2 pairs, computed on first use and cached.
  double incoherence() const {
    if (params_.m < 2) throw std::invalid_argument("incoherence: needs m >= 2");
    double cached = mu_cache_.load(std::memory_order_acquire);
    if (!std::isnan(cached)) return cached;
    double max_abs = 0.0;
    for (std::uint32_t a = 0; a + 1 < params_.m; ++a) {
      for (std::uint32_t b = a + 1; b < params_.m; ++b) {
        max_abs = std::max(max_abs, std::abs(dot(vectors_[a], vectors_[b])));
      }
    }
    const double mu = max_abs / min_norm_sq();
    mu_cache_.store(mu, std::memory_order_release);
    return mu;
  }

  // Stable identifier tying serialized artifacts to their codebook.
  std::uint64_t identity() const noexcept { return identity_; }

 private:
  Codebook() = default;

  void compute_norms() {
    min_norm_ = std::numeric_limits<double>::infinity();
    max_norm_ = 0.0;
    for (const auto& v : vectors_) {
      const double n = norm2(v);
      min_norm_ = std::min(min_norm_, n);
      max_norm_ = std::max(max_norm_, n);
    }
  }

  std::uint64_t param_hash() const {
    std::uint64_t h = rng::splitmix64(0x6864632D636Bull);  // domain tag
    auto feed = [&h](std::uint64_t x) { h = rng::splitmix64(h ^ x); };
    feed(static_cast<std::uint64_t>(params_.kind));
    feed(params_.m);
    feed(params_.d);
    feed(params_.seed);
    std::uint64_t bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&bits, &params_.sigma, 8);
    feed(bits);
    std::memcpy(&bits, &params_.density, 8);
    feed(bits);
    feed(params_.fixed_weight ? 1 : 0);
    return h;
  }

  std::uint64_t content_hash() const {
    std::uint64_t h = rng::splitmix64(0x6864632D7633ull);
    auto feed = [&h](std::uint64_t x) { h = rng::splitmix64(h ^ x); };
    feed(params_.m);
    feed(params_.d);
    for (const auto& v : vectors_) {
      switch (v.storage()) {
        case Storage::DenseBipolar:
          for (auto x : v.as_bipolar()) feed(static_cast<std::uint64_t>(x + 2));
          break;
        case Storage::DenseInteger:
          for (auto x : v.as_integer()) feed(static_cast<std::uint64_t>(x));
          break;
        case Storage::DenseReal:
          for (double x : v.as_real()) {
            std::uint64_t bits;
            std::memcpy(&bits, &x, 8);
            feed(bits);
          }
          break;
        case Storage::SparseBinary:
          for (auto x : v.as_sparse()) feed(x);
          break;
      }
    }
    return h;
  }

  CodebookParams params_;
  std::vector<Hypervector> vectors_;
  double min_norm_ = 0.0;
  double max_norm_ = 0.0;
  std::uint64_t identity_ = 0;
  mutable std::atomic<double> mu_cache_{std::numeric_limits<double>::quiet_NaN()};
};

// ---------------------------------------------------------------------------
// Subset incoherence (Def. 6 empirically).

// For each of `trials` random subsets S of size s, the max over a not in S of
// |sum_{a' in S} <phi(a), phi(a')>| / L^2.
inline std::vector<double> subset_incoherence_trials(const Codebook& cb, std::uint32_t s,
                                                     std::uint32_t trials, std::uint64_t seed) {
  if (s >= cb.m()) throw std::invalid_argument("subset incoherence: s must be < m");
  if (trials < 1) throw std::invalid_argument("subset incoherence: trials must be >= 1");
  const double l2 = cb.min_norm_sq();
  std::vector<double> out;
  out.reserve(trials);
  for (std::uint32_t t = 0; t < trials; ++t) {
    rng::SplitMix g(rng::trial_seed(seed, t));
    auto subset = g.sample_distinct(s, cb.m());
    std::vector<char> in_subset(cb.m(), 0);
    std::vector<Hypervector> members;
    members.reserve(s);
    for (auto a : subset) {
      in_subset[a] = 1;
      members.push_back(cb.codeword(a).storage() == Storage::SparseBinary
                            ? promote_to_integer(cb.codeword(a))
                            : cb.codeword(a));
    }
    const Hypervector bundle = bundle_sum(members);
    double max_abs = 0.0;
    for (std::uint32_t a = 0; a < cb.m(); ++a) {
      if (in_subset[a]) continue;
      const auto& cw = cb.codeword(a);
      double v;
      if (cw.storage() == Storage::DenseBipolar && bundle.storage() == Storage::DenseInteger) {
        v = static_cast<double>(detail::dot_i8_i32(cw.as_bipolar(), bundle.as_integer()));
      } else if (cw.storage() == Storage::SparseBinary &&
                 bundle.storage() == Storage::DenseInteger) {
        v = detail::dot_sparse_dense(cw.as_sparse(), bundle.as_integer());
      } else if (cw.storage() == Storage::DenseReal) {
        v = detail::dot_real(cw.as_real(), bundle.as_real());
      } else {
        v = dot(promote_to_real(cw), promote_to_real(bundle));
      }
      max_abs = std::max(max_abs, std::abs(v));
    }
    out.push_back(max_abs / l2);
  }
  return out;
}

inline double subset_incoherence_estimate(const Codebook& cb, std::uint32_t s,
                                          std::uint32_t trials, std::uint64_t seed) {
  const auto per_trial = subset_incoherence_trials(cb, s, trials, seed);
  return *std::max_element(per_trial.begin(), per_trial.end());
}

// ---------------------------------------------------------------------------
// Dimension sizing.

enum class SizingRegime { Uniform, Pointwise };

// Uniform: smallest d with m^2 exp(-mu^2 d / 2) <= delta at mu = 1/(2s),
// i.e. ceil(8 s^2 ln(m^2/delta)). Guarantees every subset of size <= s
// decodes, with probability 1-delta over the codebook draw.
// Pointwise: ceil(8 s ln(2m/delta)), solving 2m exp(-tau^2 d/(2s)) <= delta
// at tau = 1/2; any one fixed set decodes with probability 1-delta.
// Both instantiate the bipolar-case Hoeffding tails.
inline std::uint64_t dimension_for(std::uint32_t s, std::uint32_t m, double delta,
                                   SizingRegime regime) {
  if (s < 1 || m < 2) throw std::invalid_argument("dimension_for: need s >= 1, m >= 2");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("dimension_for: delta in (0,1)");
  const double md = static_cast<double>(m);
  double v = 0.0;
  switch (regime) {
    case SizingRegime::Uniform:
      v = 8.0 * static_cast<double>(s) * static_cast<double>(s) * std::log(md * md / delta);
      break;
    case SizingRegime::Pointwise:
      v = 8.0 * static_cast<double>(s) * std::log(2.0 * md / delta);
      break;
  }
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace hdc
