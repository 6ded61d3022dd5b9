#pragma once

// Distance-preserving encoders for Euclidean vectors:
//   - position-ID: quantize each coordinate against a monotone level
//     codebook, bind with a per-feature key, sum (preserves L1),
//   - signed random projection: sign(Phi x) with unit rows (preserves angle),
//   - quantized random Fourier features for the Gaussian kernel,
// plus the distortion report (alpha/beta fit of Def-19 form), cluster
// preservation and robustness-margin checks built on it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hdc/codebook.hpp"
#include "hdc/hypervector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

// ---------------------------------------------------------------------------
// Level codebooks: correlation decreasing linearly with bin distance.

// phi(a_1) is random bipolar; each successive codeword flips the next
// ceil(d / (2(m-1))) not-yet-flipped positions under a seeded permutation of
// the coordinates, so a bit is flipped at most once and the end bins are
// (up to ceiling drift) orthogonal.
inline Codebook level_codebook(std::uint32_t bins, std::uint32_t d, std::uint64_t seed) {
  if (bins < 2) throw std::invalid_argument("level_codebook: needs >= 2 bins");
  if (d < 2) throw std::invalid_argument("level_codebook: needs d >= 2");
  const auto flips_per_step = static_cast<std::uint32_t>(
      std::ceil(static_cast<double>(d) / (2.0 * (bins - 1))));
  std::vector<std::int8_t> current(d);
  rng::fill_bipolar(current, seed, 0);
  const auto perm = rng::random_permutation(d, rng::key2(seed, 0x4C65764Cull));
  std::vector<Hypervector> rows;
  rows.reserve(bins);
  rows.push_back(Hypervector::bipolar(std::vector<std::int8_t>(current)));
  std::uint64_t flipped = 0;
  for (std::uint32_t k = 1; k < bins; ++k) {
    const std::uint64_t until = std::min<std::uint64_t>(flipped + flips_per_step, d);
    for (; flipped < until; ++flipped) {
      current[perm[flipped]] = static_cast<std::int8_t>(-current[perm[flipped]]);
    }
    rows.push_back(Hypervector::bipolar(std::vector<std::int8_t>(current)));
  }
  return Codebook::from_vectors(CodebookKind::DenseBipolar, seed, std::move(rows));
}

// ---------------------------------------------------------------------------
// Position-ID encoder.

class PositionIdEncoder {
 public:
  // A single level codebook is shared by all features by default;
  // per_feature_levels samples an independent one per feature.
  static PositionIdEncoder create(std::uint32_t n, std::uint32_t bins, std::uint32_t d,
                                  std::uint64_t seed, bool per_feature_levels = false) {
    if (n < 1) throw std::invalid_argument("position-id: n >= 1");
    PositionIdEncoder enc;
    enc.n_ = n;
    enc.bins_ = bins;
    enc.d_ = d;
    enc.seed_ = seed;
    const std::uint32_t nlevels = per_feature_levels ? n : 1;
    enc.level_cbs_.reserve(nlevels);
    for (std::uint32_t f = 0; f < nlevels; ++f) {
      enc.level_cbs_.push_back(level_codebook(bins, d, rng::key3(seed, 0x4C766C, f)));
    }
    CodebookParams fp;
    fp.kind = CodebookKind::DenseBipolar;
    fp.m = n;
    fp.d = d;
    fp.seed = rng::key2(seed, 0x466561ull);
    enc.feature_cb_.emplace(Codebook::generate(fp));
    return enc;
  }

  std::uint32_t input_dim() const noexcept { return n_; }
  std::uint32_t bins() const noexcept { return bins_; }
  std::uint32_t d() const noexcept { return d_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Codebook& level_cb(std::uint32_t feature) const {
    return level_cbs_.size() == 1 ? level_cbs_[0] : level_cbs_.at(feature);
  }
  const Codebook& feature_cb() const { return *feature_cb_; }

  // Nearest bin centroid for x in [0,1]; centroids sit at bin midpoints.
  std::uint32_t quantize(double x) const noexcept {
    const double clamped = std::clamp(x, 0.0, 1.0);
    const auto b = static_cast<std::uint32_t>(clamped * bins_);
    return std::min(b, bins_ - 1);
  }
  double centroid(std::uint32_t bin) const noexcept {
    return (static_cast<double>(bin) + 0.5) / static_cast<double>(bins_);
  }

 private:
  PositionIdEncoder() = default;
  std::uint32_t n_ = 0, bins_ = 0, d_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Codebook> level_cbs_;
  std::optional<Codebook> feature_cb_;
};

// phi(x) = sum_i phi_level(quantize(x_i)) (x) psi(f_i). Coordinates outside
// [0,1] are clamped (warned once per process).
inline Hypervector encode_position_id(std::span<const double> x, const PositionIdEncoder& enc) {
  if (x.size() != enc.input_dim()) {
    throw std::invalid_argument("encode_position_id: input dimension mismatch");
  }
  static std::atomic<bool> warned{false};
  std::vector<Hypervector> bound;
  bound.reserve(x.size());
  for (std::uint32_t f = 0; f < x.size(); ++f) {
    if ((x[f] < 0.0 || x[f] > 1.0) && !warned.exchange(true)) {
      std::cerr << "hdc: position-id input outside [0,1], clamping\n";
    }
    bound.push_back(
        bind(enc.level_cb(f).codeword(enc.quantize(x[f])), enc.feature_cb().codeword(f)));
  }
  return bundle_sum(bound, enc.d());
}

// ||h1 - h2||^2 / (2d): estimates the L1 distance between the encoded points.
inline double l1_estimate(const Hypervector& h1, const Hypervector& h2,
                          const PositionIdEncoder& enc) {
  const double sq = norm2_sq(h1) + norm2_sq(h2) - 2.0 * dot(h1, h2);
  return sq / (2.0 * static_cast<double>(enc.d()));
}

// ---------------------------------------------------------------------------
// Signed random projection.

class SrpEncoder {
 public:
  static SrpEncoder create(std::uint32_t n, std::uint32_t d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("srp: n, d >= 1");
    SrpEncoder enc;
    enc.n_ = n;
    enc.d_ = d;
    enc.seed_ = seed;
    enc.rows_.resize(static_cast<std::size_t>(n) * d);
    for (std::uint32_t r = 0; r < d; ++r) {
      std::span<double> row(enc.rows_.data() + static_cast<std::size_t>(r) * n, n);
      rng::fill_gaussian(row, seed, r, 1.0);
      double nrm = 0.0;
      for (double v : row) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (nrm == 0.0) throw std::runtime_error("srp: degenerate zero row");
      for (double& v : row) v /= nrm;
    }
    return enc;
  }

  std::uint32_t input_dim() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> row(std::uint32_t r) const {
    return {rows_.data() + static_cast<std::size_t>(r) * n_, n_};
  }

 private:
  SrpEncoder() = default;
  std::uint32_t n_ = 0, d_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> rows_;
};

// sign(Phi x) with sign(0) = +1. The input is normalized onto the unit
// sphere first; the all-zero vector has no direction and is rejected.
inline Hypervector srp_encode(std::span<const double> x, const SrpEncoder& enc) {
  if (x.size() != enc.input_dim()) {
    throw std::invalid_argument("srp_encode: input dimension mismatch");
  }
  double nrm = 0.0;
  for (double v : x) nrm += v * v;
  if (nrm == 0.0) throw std::invalid_argument("srp_encode: zero vector");
  std::vector<std::int8_t> out(enc.d());
  for (std::uint32_t r = 0; r < enc.d(); ++r) {
    auto row = enc.row(r);
    double acc = 0.0;
    for (std::uint32_t j = 0; j < x.size(); ++j) acc += row[j] * x[j];
    out[r] = acc >= 0.0 ? std::int8_t{1} : std::int8_t{-1};
  }
  return Hypervector::bipolar(std::move(out));
}

// hamming / d, an estimate of theta = acos(<x,x'>) / pi.
inline double angle_estimate(const Hypervector& h1, const Hypervector& h2) {
  return static_cast<double>(hamming(h1, h2)) / static_cast<double>(h1.dim());
}

// Normalized angular distance between raw vectors: acos(<x,y>/(|x||y|)) / pi.
inline double angular_distance(std::span<const double> x, std::span<const double> y) {
  double xy = 0.0, xx = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  const double c = std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0);
  return std::acos(c) / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// Quantized random Fourier features (Gaussian kernel).

inline double gaussian_kernel(std::span<const double> x, std::span<const double> y,
                              double gamma) {
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dxy = x[i] - y[i];
    sq += dxy * dxy;
  }
  return std::exp(-gamma * sq);
}

class RffEncoder {
 public:
  // k(x,x') = exp(-gamma ||x-x'||^2); spectral rows ~ N(0, 2 gamma I),
  // phases ~ U[0, 2 pi), quantizer thresholds ~ U[-1, 1]. The spectral
  // sampling is the only kernel-specific piece.
  static RffEncoder create(std::uint32_t n, std::uint32_t d, double gamma, std::uint64_t seed) {
    if (n < 1 || d < 1) throw std::invalid_argument("rff: n, d >= 1");
    if (!(gamma > 0)) throw std::invalid_argument("rff: bandwidth must be > 0");
    RffEncoder enc;
    enc.n_ = n;
    enc.d_ = d;
    enc.gamma_ = gamma;
    enc.seed_ = seed;
    enc.rows_.resize(static_cast<std::size_t>(n) * d);
    const double sigma = std::sqrt(2.0 * gamma);
    for (std::uint32_t r = 0; r < d; ++r) {
      rng::fill_gaussian({enc.rows_.data() + static_cast<std::size_t>(r) * n, n}, seed, r,
                         sigma);
    }
    enc.phases_.resize(d);
    enc.thresholds_.resize(d);
    for (std::uint32_t r = 0; r < d; ++r) {
      enc.phases_[r] = 2.0 * std::numbers::pi * rng::to_unit(rng::key3(seed, 0x706873ull, r));
      enc.thresholds_[r] = 2.0 * rng::to_unit(rng::key3(seed, 0x746872ull, r)) - 1.0;
    }
    return enc;
  }

  std::uint32_t input_dim() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }
  double bandwidth() const noexcept { return gamma_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> row(std::uint32_t r) const {
    return {rows_.data() + static_cast<std::size_t>(r) * n_, n_};
  }
  double phase(std::uint32_t r) const { return phases_[r]; }
  double threshold(std::uint32_t r) const { return thresholds_[r]; }

 private:
  RffEncoder() = default;
  std::uint32_t n_ = 0, d_ = 0;
  double gamma_ = 0.0;
  std::uint64_t seed_ = 0;
  std::vector<double> rows_, phases_, thresholds_;
};

// Unquantized: DenseReal with entries sqrt(2/d) cos(<Phi_r, x> + b_r), so
// <phi(x), phi(x')> -> k(x,x') as d grows. Quantized: binary with bit r set
// iff cos(<Phi_r, x> + b_r) + t_r >= 0 (threshold applied to the raw cosine,
// which lives in [-1,1] like the thresholds).
inline Hypervector rff_encode(std::span<const double> x, const RffEncoder& enc, bool quantized) {
  if (x.size() != enc.input_dim()) {
    throw std::invalid_argument("rff_encode: input dimension mismatch");
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(enc.d()));
  if (quantized) {
    std::vector<std::uint32_t> idx;
    idx.reserve(enc.d() / 2);
    for (std::uint32_t r = 0; r < enc.d(); ++r) {
      auto row = enc.row(r);
      double acc = enc.phase(r);
      for (std::uint32_t j = 0; j < x.size(); ++j) acc += row[j] * x[j];
      if (std::cos(acc) + enc.threshold(r) >= 0.0) idx.push_back(r);
    }
    return Hypervector::sparse(enc.d(), std::move(idx));
  }
  std::vector<double> out(enc.d());
  for (std::uint32_t r = 0; r < enc.d(); ++r) {
    auto row = enc.row(r);
    double acc = enc.phase(r);
    for (std::uint32_t j = 0; j < x.size(); ++j) acc += row[j] * x[j];
    out[r] = scale * std::cos(acc);
  }
  return Hypervector::real(std::move(out));
}

// ---------------------------------------------------------------------------
// Distortion reporting (empirical alpha/beta of Def. 19).

enum class InputMetric { L1, L2, Angular };
enum class CodeMetric { SqEuclid, Hamming, Angular };

inline double input_distance(std::span<const double> x, std::span<const double> y,
                             InputMetric metric) {
  switch (metric) {
    case InputMetric::L1: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
      return s;
    }
    case InputMetric::L2: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    }
    case InputMetric::Angular:
      return angular_distance(x, y);
  }
  throw std::logic_error("unreachable");
}

inline double code_distance(const Hypervector& a, const Hypervector& b, CodeMetric metric) {
  switch (metric) {
    case CodeMetric::SqEuclid: {
      if (a.storage() == b.storage()) {
        return norm2_sq(a) + norm2_sq(b) - 2.0 * dot(a, b);
      }
      const Hypervector ar = promote_to_real(a), br = promote_to_real(b);
      return norm2_sq(ar) + norm2_sq(br) - 2.0 * dot(ar, br);
    }
    case CodeMetric::Hamming:
      return static_cast<double>(hamming(a, b));
    case CodeMetric::Angular: {
      const double na = norm2(a), nb = norm2(b);
      if (na == 0.0 || nb == 0.0) return 0.0;
      const double c =
          std::clamp((a.storage() == b.storage() ? dot(a, b)
                                                 : dot(promote_to_real(a), promote_to_real(b))) /
                         (na * nb),
                     -1.0, 1.0);
      return std::acos(c) / std::numbers::pi;
    }
  }
  throw std::logic_error("unreachable");
}

struct DistortionReport {
  std::size_t pairs_tested = 0;
  double alpha_fit = 0.0;  // least-squares slope through the origin
  double beta_max = 0.0;   // max |delta_H - alpha delta_X|
  double residual_q50 = 0.0;
  double residual_q90 = 0.0;
  double residual_q99 = 0.0;
};

using VectorPair = std::pair<std::vector<double>, std::vector<double>>;

template <typename EncodeFn>
DistortionReport distortion_report(EncodeFn&& encode, std::span<const VectorPair> pairs,
                                   InputMetric dx, CodeMetric dh) {
  if (pairs.size() < 2) throw std::invalid_argument("distortion_report: needs >= 2 pairs");
  std::vector<double> xs, hs;
  xs.reserve(pairs.size());
  hs.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    xs.push_back(input_distance(x, y, dx));
    hs.push_back(code_distance(encode(std::span<const double>(x)),
                               encode(std::span<const double>(y)), dh));
  }
  double sxx = 0.0, sxh = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxh += xs[i] * hs[i];
  }
  if (sxx == 0.0) {
    throw std::invalid_argument("distortion_report: all input distances are zero");
  }
  DistortionReport rep;
  rep.pairs_tested = pairs.size();
  rep.alpha_fit = sxh / sxx;
  std::vector<double> residuals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    residuals[i] = std::abs(hs[i] - rep.alpha_fit * xs[i]);
  }
  std::sort(residuals.begin(), residuals.end());
  auto quant = [&](double q) {
    const auto idx = static_cast<std::size_t>(q * (residuals.size() - 1));
    return residuals[idx];
  };
  rep.beta_max = residuals.back();
  rep.residual_q50 = quant(0.50);
  rep.residual_q90 = quant(0.90);
  rep.residual_q99 = quant(0.99);
  return rep;
}

// ---------------------------------------------------------------------------
// Cluster preservation (sufficient condition, one-sided).

struct ClusterPreservationReport {
  double min_margin_gap = 0.0;   // min over points of half the runner-up gap
  double beta_over_alpha = 0.0;  // measured on the point-centroid pairs
  bool condition_met = false;
  bool assignments_preserved = false;
  double agreement = 0.0;
  std::size_t points = 0;
};

template <typename EncodeFn>
ClusterPreservationReport cluster_preservation_check(
    EncodeFn&& encode, std::span<const std::vector<double>> centroids,
    std::span<const std::vector<double>> points, InputMetric dx, CodeMetric dh) {
  if (centroids.empty() || points.empty()) {
    throw std::invalid_argument("cluster_preservation_check: empty inputs");
  }
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    for (std::size_t j = i + 1; j < centroids.size(); ++j) {
      if (centroids[i] == centroids[j]) {
        throw std::invalid_argument("cluster_preservation_check: duplicate centroids");
      }
    }
  }
  std::vector<Hypervector> enc_centroids;
  enc_centroids.reserve(centroids.size());
  for (const auto& c : centroids) enc_centroids.push_back(encode(std::span<const double>(c)));

  ClusterPreservationReport rep;
  rep.points = points.size();
  rep.min_margin_gap = std::numeric_limits<double>::infinity();
  std::size_t agree = 0;
  std::vector<VectorPair> fit_pairs;
  fit_pairs.reserve(points.size() * centroids.size());
  for (const auto& p : points) {
    const Hypervector hp = encode(std::span<const double>(p));
    std::size_t best_x = 0, best_h = 0;
    double best_xd = std::numeric_limits<double>::infinity();
    double best_hd = std::numeric_limits<double>::infinity();
    std::vector<double> xds(centroids.size());
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      xds[c] = input_distance(p, centroids[c], dx);
      if (xds[c] < best_xd) {
        best_xd = xds[c];
        best_x = c;
      }
      const double hd = code_distance(hp, enc_centroids[c], dh);
      if (hd < best_hd) {
        best_hd = hd;
        best_h = c;
      }
      fit_pairs.emplace_back(p, centroids[c]);
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (c != best_x) {
        rep.min_margin_gap = std::min(rep.min_margin_gap, 0.5 * (xds[c] - best_xd));
      }
    }
    agree += (best_x == best_h);
  }
  rep.agreement = static_cast<double>(agree) / static_cast<double>(points.size());
  rep.assignments_preserved = agree == points.size();
  if (centroids.size() == 1) {
    rep.condition_met = true;  // single centroid: trivially preserved
    rep.beta_over_alpha = 0.0;
    return rep;
  }
  const DistortionReport fit = distortion_report(encode, fit_pairs, dx, dh);
  rep.beta_over_alpha = fit.alpha_fit != 0.0 ? fit.beta_max / fit.alpha_fit
                                             : std::numeric_limits<double>::infinity();
  rep.condition_met = rep.beta_over_alpha < rep.min_margin_gap;
  return rep;
}

// ---------------------------------------------------------------------------
// (eps1, eps2)-robustness margins under rho-bounded noise.

// (alpha/4)(eps2 - eps1) - beta/2 - rho; positive guarantees nearest-neighbor
// ordering between the eps1-ball and the eps2-far set.
inline double robustness_margin(double eps1, double eps2, double rho,
                                const DistortionReport& report) {
  if (!(eps2 > eps1) || eps1 < 0) {
    throw std::invalid_argument("robustness_margin: need eps2 > eps1 >= 0");
  }
  return 0.25 * report.alpha_fit * (eps2 - eps1) - 0.5 * report.beta_max - rho;
}

// AWGN tolerance: sigma < (alpha/(16 L))(eps2-eps1) - beta/(8 L), with L the
// max encoding norm.
inline double euclid_awgn_tolerance(double eps1, double eps2, double max_norm,
                                    const DistortionReport& report) {
  if (!(eps2 > eps1) || eps1 < 0) {
    throw std::invalid_argument("euclid_awgn_tolerance: need eps2 > eps1 >= 0");
  }
  return report.alpha_fit / (16.0 * max_norm) * (eps2 - eps1) -
         report.beta_max / (8.0 * max_norm);
}

// Adversarial bit-corruption tolerance: omega < (alpha/(4d))(eps2-eps1) - beta/(2d).
inline double euclid_adversarial_tolerance(double eps1, double eps2, std::uint32_t d,
                                           const DistortionReport& report) {
  if (!(eps2 > eps1) || eps1 < 0) {
    throw std::invalid_argument("euclid_adversarial_tolerance: need eps2 > eps1 >= 0");
  }
  const double dd = static_cast<double>(d);
  return report.alpha_fit / (4.0 * dd) * (eps2 - eps1) - report.beta_max / (2.0 * dd);
}

}  // namespace hdc
