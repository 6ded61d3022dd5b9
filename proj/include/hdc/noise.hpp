#pragma once

// Passive and adversarial corruption models for encoded vectors, the
// rho-boundedness measure, and the decoding-margin / tolerance predicates.
//
// Passive models (Awgn, UniformInteger, TernaryFlip) are seed-deterministic
// and coordinate-independent. Adversarial models direct the perturbation
// against a target symbol: AdversarialL2 spends its norm budget on
// -omega L phi(target)/||phi(target)||, AdversarialL1 greedily flips the
// coordinates agreeing most with the target. These are strong concrete
// adversaries used to exercise the safety guarantee, not optimality claims.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "hdc/codebook.hpp"
#include "hdc/hypervector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

struct NoiseSpec {
  enum class Model { Awgn, UniformInteger, TernaryFlip, AdversarialL2, AdversarialL1 };

  Model model = Model::Awgn;
  double sigma = 0.0;   // Awgn std-dev
  std::int32_t c = 0;   // UniformInteger range [-c, c]
  double theta = 0.0;   // TernaryFlip probability
  double omega = 0.0;   // AdversarialL2 budget, in multiples of L
  double budget = 0.0;  // AdversarialL1 budget, absolute
  std::uint64_t seed = 0;

  static NoiseSpec awgn(double sigma, std::uint64_t seed) {
    if (sigma < 0) throw std::invalid_argument("awgn: sigma >= 0");
    NoiseSpec n;
    n.model = Model::Awgn;
    n.sigma = sigma;
    n.seed = seed;
    return n;
  }
  static NoiseSpec uniform_integer(std::int32_t c, std::uint64_t seed) {
    if (c < 0) throw std::invalid_argument("uniform_integer: c >= 0");
    NoiseSpec n;
    n.model = Model::UniformInteger;
    n.c = c;
    n.seed = seed;
    return n;
  }
  static NoiseSpec ternary_flip(double theta, std::uint64_t seed) {
    if (!(theta >= 0 && theta <= 1)) throw std::invalid_argument("ternary_flip: theta in [0,1]");
    NoiseSpec n;
    n.model = Model::TernaryFlip;
    n.theta = theta;
    n.seed = seed;
    return n;
  }
  static NoiseSpec adversarial_l2(double omega) {
    if (omega < 0) throw std::invalid_argument("adversarial_l2: omega >= 0");
    NoiseSpec n;
    n.model = Model::AdversarialL2;
    n.omega = omega;
    return n;
  }
  static NoiseSpec adversarial_l1(double budget) {
    if (budget < 0) throw std::invalid_argument("adversarial_l1: budget >= 0");
    NoiseSpec n;
    n.model = Model::AdversarialL1;
    n.budget = budget;
    return n;
  }
};

inline const char* noise_model_name(NoiseSpec::Model m) {
  switch (m) {
    case NoiseSpec::Model::Awgn: return "awgn";
    case NoiseSpec::Model::UniformInteger: return "uniform-integer";
    case NoiseSpec::Model::TernaryFlip: return "ternary-flip";
    case NoiseSpec::Model::AdversarialL2: return "adversarial-l2";
    case NoiseSpec::Model::AdversarialL1: return "adversarial-l1";
  }
  return "?";
}

// Corrupted copy of h. Adversarial models need the codebook and a target
// symbol; passive models ignore both.
inline Hypervector apply_noise(const Hypervector& h, const NoiseSpec& spec,
                               const Codebook* cb = nullptr,
                               std::optional<std::uint32_t> target = std::nullopt) {
  const std::uint32_t d = h.dim();
  switch (spec.model) {
    case NoiseSpec::Model::Awgn: {
      if (h.storage() == Storage::SparseBinary) {
        throw std::invalid_argument("awgn: requires dense storage");
      }
      if (spec.sigma == 0.0) return h;
      Hypervector hr = promote_to_real(h);
      std::vector<double> out(hr.as_real().begin(), hr.as_real().end());
      rng::SplitMix g(spec.seed);
      for (auto& x : out) x += spec.sigma * g.next_gaussian();
      return Hypervector::real(std::move(out));
    }
    case NoiseSpec::Model::UniformInteger: {
      if (h.storage() != Storage::DenseInteger && h.storage() != Storage::DenseBipolar) {
        throw std::invalid_argument("uniform-integer: requires integer or bipolar storage");
      }
      if (spec.c == 0) return h;
      Hypervector hi = promote_to_integer(h);
      std::vector<std::int32_t> out(hi.as_integer().begin(), hi.as_integer().end());
      rng::SplitMix g(spec.seed);
      const std::uint64_t span = 2ull * static_cast<std::uint32_t>(spec.c) + 1;
      for (auto& x : out) {
        x += static_cast<std::int32_t>(static_cast<std::int64_t>(g.bounded(span)) - spec.c);
      }
      return Hypervector::integer(std::move(out), hi.bound() + spec.c);
    }
    case NoiseSpec::Model::TernaryFlip: {
      if (h.storage() != Storage::SparseBinary) {
        throw std::invalid_argument("ternary-flip: requires SparseBinary storage");
      }
      if (spec.theta == 0.0) return h;
      // Add {-1,0,+1} with prob {theta/2, 1-theta, theta/2}, truncate to {0,1}.
      std::vector<char> on(d, 0);
      for (auto i : h.as_sparse()) on[i] = 1;
      rng::SplitMix g(spec.seed);
      std::vector<std::uint32_t> idx;
      idx.reserve(h.as_sparse().size() + static_cast<std::size_t>(0.6 * spec.theta * d) + 8);
      for (std::uint32_t i = 0; i < d; ++i) {
        const double u = g.next_unit();
        int delta = 0;
        if (u < 0.5 * spec.theta) {
          delta = -1;
        } else if (u < spec.theta) {
          delta = +1;
        }
        const int value = std::clamp(static_cast<int>(on[i]) + delta, 0, 1);
        if (value) idx.push_back(i);
      }
      return Hypervector::sparse(d, std::move(idx));
    }
    case NoiseSpec::Model::AdversarialL2: {
      if (cb == nullptr || !target) {
        throw std::invalid_argument("adversarial-l2: needs a codebook and target symbol");
      }
      if (spec.omega == 0.0) return h;
      const Hypervector tw = promote_to_real(cb->codeword(*target));
      const double tn = norm2(tw);
      if (tn == 0.0) throw std::invalid_argument("adversarial-l2: zero-norm target codeword");
      const double scale = -spec.omega * cb->min_norm() / tn;
      Hypervector hr = promote_to_real(h);
      std::vector<double> out(hr.as_real().begin(), hr.as_real().end());
      auto t = tw.as_real();
      for (std::uint32_t i = 0; i < d; ++i) out[i] += scale * t[i];
      return Hypervector::real(std::move(out));
    }
    case NoiseSpec::Model::AdversarialL1: {
      if (cb == nullptr || !target) {
        throw std::invalid_argument("adversarial-l1: needs a codebook and target symbol");
      }
      if (spec.budget == 0.0) return h;
      const Hypervector tw = promote_to_real(cb->codeword(*target));
      const Hypervector hr = promote_to_real(h);
      auto t = tw.as_real();
      auto hv = hr.as_real();
      // Rank coordinates by how much they agree with the target.
      std::vector<std::uint32_t> order(d);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        return t[x] * hv[x] > t[y] * hv[y];
      });
      std::vector<double> out(hv.begin(), hv.end());
      double remaining = spec.budget;
      for (std::uint32_t i : order) {
        if (remaining <= 0.0) break;
        if (t[i] == 0.0) continue;
        const double unit = std::min(remaining, 1.0);
        out[i] -= (t[i] > 0 ? unit : -unit);
        remaining -= unit;
      }
      Hypervector noisy = Hypervector::real(std::move(out));
      // Sparse-binary inputs re-truncate to {0,1} after the additive step.
      if (h.storage() == Storage::SparseBinary) return binarize(noisy, 1.0);
      return noisy;
    }
  }
  throw std::logic_error("unreachable");
}

// Exact rho of a realized corruption: max over the alphabet of
// |<phi(a), delta>| (brute force).
inline double rho_bound(const Codebook& cb, const Hypervector& delta) {
  if (delta.dim() != cb.d()) throw std::invalid_argument("rho_bound: dimension mismatch");
  double max_abs = 0.0;
  for (std::uint32_t a = 0; a < cb.m(); ++a) {
    const auto& cw = cb.codeword(a);
    double v = 0.0;
    if (delta.storage() == Storage::DenseReal) {
      switch (cw.storage()) {
        case Storage::DenseBipolar: v = detail::dot_i8_real(cw.as_bipolar(), delta.as_real()); break;
        case Storage::SparseBinary: v = detail::dot_sparse_dense(cw.as_sparse(), delta.as_real()); break;
        default: v = dot(promote_to_real(cw), delta);
      }
    } else if (delta.storage() == Storage::DenseInteger) {
      switch (cw.storage()) {
        case Storage::DenseBipolar:
          v = static_cast<double>(detail::dot_i8_i32(cw.as_bipolar(), delta.as_integer()));
          break;
        case Storage::SparseBinary:
          v = detail::dot_sparse_dense(cw.as_sparse(), delta.as_integer());
          break;
        default: v = dot(promote_to_real(cw), promote_to_real(delta));
      }
    } else {
      v = dot(promote_to_real(cw), promote_to_real(delta));
    }
    max_abs = std::max(max_abs, std::abs(v));
  }
  return max_abs;
}

// Difference of two encodings as a real vector; convenience for feeding the
// realized corruption to rho_bound.
inline Hypervector corruption_delta(const Hypervector& noisy, const Hypervector& clean) {
  const Hypervector a = promote_to_real(noisy);
  const Hypervector b = promote_to_real(clean);
  detail::require_same_dim(a, b);
  std::vector<double> out(a.as_real().begin(), a.as_real().end());
  auto bs = b.as_real();
  for (std::uint32_t i = 0; i < out.size(); ++i) out[i] -= bs[i];
  return Hypervector::real(std::move(out));
}

// Decoding margin 1/2 - s mu_emp - rho / L^2. Decoding of any set of size
// <= s under rho-bounded corruption is guaranteed while this is positive.
inline double decoding_margin(const Codebook& cb, std::uint32_t s, double rho) {
  if (s < 1) throw std::invalid_argument("decoding_margin: s >= 1");
  return 0.5 - static_cast<double>(s) * cb.incoherence() - rho / cb.min_norm_sq();
}

// Closed-form maximum noise parameter per model, evaluated with the measured
// mu_emp of this codebook. Negative values mean no noise level is certified
// at these parameters.
inline double tolerance(const Codebook& cb, std::uint32_t s, double delta,
                        NoiseSpec::Model model) {
  if (s < 1) throw std::invalid_argument("tolerance: s >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("tolerance: delta in (0,1)");
  const double mu = cb.incoherence();
  const double L = cb.min_norm();
  const double d = static_cast<double>(cb.d());
  const double m = static_cast<double>(cb.m());
  const double slack = 0.5 - static_cast<double>(s) * mu;
  const double tail = std::sqrt(2.0 * std::log(2.0 * m / delta));
  switch (model) {
    case NoiseSpec::Model::Awgn:
      return (L / tail) * slack;
    case NoiseSpec::Model::UniformInteger:
      return std::sqrt(d / (2.0 * std::log(2.0 * m / delta))) * slack;
    case NoiseSpec::Model::TernaryFlip: {
      if (cb.kind() != CodebookKind::SparseBinary) {
        throw std::invalid_argument("tolerance: ternary-flip applies to sparse codebooks");
      }
      const double p = cb.params().density;
      return 0.5 - 2.0 * static_cast<double>(s) * mu -
             std::sqrt(std::log(2.0 * m / delta) / (2.0 * d * p));
    }
    case NoiseSpec::Model::AdversarialL2:
      return slack;  // omega, in multiples of L
    case NoiseSpec::Model::AdversarialL1:
      if (cb.kind() == CodebookKind::SparseBinary) {
        return cb.params().density * slack;  // omega; budget = omega * d
      }
      return 1.0 / (2.0 * static_cast<double>(s)) - mu;  // omega; budget = omega * s * d
  }
  throw std::logic_error("unreachable");
}

// Absolute L1 budget corresponding to an omega from tolerance(AdversarialL1).
inline double adversarial_l1_budget(const Codebook& cb, std::uint32_t s, double omega) {
  if (cb.kind() == CodebookKind::SparseBinary) return omega * cb.d();
  return omega * static_cast<double>(s) * cb.d();
}

}  // namespace hdc
