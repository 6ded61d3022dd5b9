#pragma once

// Learning on HD representations: bundled class prototypes with
// normalized-dot prediction, multiclass perceptron fine-tuning, balanced
// Winnow for sparse separators, the closest-pair separating function, and
// the planted sparse-separator experiment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hdc/euclid.hpp"
#include "hdc/hypervector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

namespace detail {

// Dot of an arbitrary-storage hypervector against a double accumulator.
inline double dot_acc(const Hypervector& h, std::span<const double> acc) {
  switch (h.storage()) {
    case Storage::DenseBipolar: {
      auto s = h.as_bipolar();
      double v = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) v += static_cast<double>(s[i]) * acc[i];
      return v;
    }
    case Storage::DenseInteger: {
      auto s = h.as_integer();
      double v = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) v += static_cast<double>(s[i]) * acc[i];
      return v;
    }
    case Storage::DenseReal:
      return dot_real(h.as_real(), acc);
    case Storage::SparseBinary: {
      double v = 0.0;
      for (auto i : h.as_sparse()) v += acc[i];
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

inline void add_to_acc(const Hypervector& h, std::span<double> acc, double scale) {
  switch (h.storage()) {
    case Storage::DenseBipolar: {
      auto s = h.as_bipolar();
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] += scale * s[i];
      return;
    }
    case Storage::DenseInteger: {
      auto s = h.as_integer();
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] += scale * s[i];
      return;
    }
    case Storage::DenseReal: {
      auto s = h.as_real();
      for (std::size_t i = 0; i < s.size(); ++i) acc[i] += scale * s[i];
      return;
    }
    case Storage::SparseBinary: {
      for (auto i : h.as_sparse()) acc[i] += scale;
      return;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Nearest-prototype classifier.

// Per-class bundles of training encodings; prediction is the argmax of the
// norm-normalized dot, ties toward the lowest class index (classes ordered by
// first appearance). Accumulators are doubles, which keeps integer-valued
// streams exact, so training order does not change integer prototypes.
class PrototypeModel {
 public:
  PrototypeModel() = default;

  void add(const Hypervector& h, std::int32_t label) {
    if (dim_ == 0) dim_ = h.dim();
    if (h.dim() != dim_) throw std::invalid_argument("prototype add: dimension mismatch");
    const std::size_t k = class_index(label, true);
    detail::add_to_acc(h, accs_[k], 1.0);
    counts_[k] += 1;
    integral_ = integral_ && h.storage() != Storage::DenseReal;
    refresh_norm(k);
  }

  std::size_t num_classes() const noexcept { return labels_.size(); }
  std::uint32_t dim() const noexcept { return dim_; }
  std::int32_t label(std::size_t k) const { return labels_.at(k); }
  std::int64_t count(std::size_t k) const { return counts_.at(k); }
  double norm(std::size_t k) const { return norms_.at(k); }
  std::span<const double> accumulator(std::size_t k) const { return accs_.at(k); }
  bool integral() const noexcept { return integral_; }

  // <c_k, h> / ||c_k||; zero-norm prototypes score 0.
  double score(std::size_t k, const Hypervector& h) const {
    const double n = norms_.at(k);
    if (n == 0.0) return 0.0;
    return detail::dot_acc(h, accs_[k]) / n;
  }

  std::size_t predict_index(const Hypervector& h) const {
    if (labels_.empty()) throw std::logic_error("predict: empty model");
    if (h.dim() != dim_) throw std::invalid_argument("predict: dimension mismatch");
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      const double s = score(k, h);
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
    return best;
  }

  std::int32_t predict(const Hypervector& h) const { return labels_[predict_index(h)]; }

  Hypervector prototype(std::size_t k) const {
    const auto& a = accs_.at(k);
    if (integral_) {
      std::vector<std::int32_t> v(a.size());
      std::int64_t bound = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        v[i] = static_cast<std::int32_t>(a[i]);
        bound = std::max<std::int64_t>(bound, std::abs(v[i]));
      }
      return Hypervector::integer(std::move(v), bound);
    }
    return Hypervector::real(std::vector<double>(a.begin(), a.end()));
  }

  // Restore from serialized state.
  static PrototypeModel restore(std::uint32_t dim, bool integral,
                                std::vector<std::int32_t> labels,
                                std::vector<std::int64_t> counts,
                                std::vector<std::vector<double>> accumulators) {
    if (labels.size() != counts.size() || labels.size() != accumulators.size()) {
      throw std::invalid_argument("prototype restore: inconsistent sizes");
    }
    PrototypeModel m;
    m.dim_ = dim;
    m.integral_ = integral;
    m.labels_ = std::move(labels);
    m.counts_ = std::move(counts);
    m.accs_ = std::move(accumulators);
    m.norms_.resize(m.accs_.size());
    for (std::size_t k = 0; k < m.accs_.size(); ++k) m.refresh_norm(k);
    return m;
  }

 private:
  friend std::uint64_t perceptron_finetune(PrototypeModel&,
                                           std::span<const std::pair<Hypervector, std::int32_t>>,
                                           std::uint32_t);

  std::size_t class_index(std::int32_t label, bool create) {
    for (std::size_t k = 0; k < labels_.size(); ++k) {
      if (labels_[k] == label) return k;
    }
    if (!create) throw std::invalid_argument("unknown class label");
    labels_.push_back(label);
    counts_.push_back(0);
    accs_.emplace_back(dim_, 0.0);
    norms_.push_back(0.0);
    return labels_.size() - 1;
  }

  void refresh_norm(std::size_t k) {
    double n = 0.0;
    for (double v : accs_[k]) n += v * v;
    norms_[k] = std::sqrt(n);
  }

  std::uint32_t dim_ = 0;
  bool integral_ = true;
  std::vector<std::int32_t> labels_;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<double>> accs_;
  std::vector<double> norms_;
};

inline PrototypeModel train_prototypes(
    std::span<const std::pair<Hypervector, std::int32_t>> stream) {
  PrototypeModel m;
  for (const auto& [h, y] : stream) m.add(h, y);
  return m;
}

// Multiclass perceptron rounds over the stream: on a mistake (y-hat != y),
// prototypes[y] += phi(x) and prototypes[y-hat] -= phi(x), rate 1. Stops
// early after a mistake-free epoch. Returns the total mistake count.
inline std::uint64_t perceptron_finetune(
    PrototypeModel& model, std::span<const std::pair<Hypervector, std::int32_t>> stream,
    std::uint32_t epochs) {
  if (epochs < 1) throw std::invalid_argument("perceptron_finetune: epochs >= 1");
  std::uint64_t mistakes = 0;
  for (std::uint32_t e = 0; e < epochs; ++e) {
    std::uint64_t epoch_mistakes = 0;
    for (const auto& [h, y] : stream) {
      const std::size_t truth = model.class_index(y, true);
      const std::size_t guess = model.predict_index(h);
      if (guess == truth) continue;
      ++epoch_mistakes;
      detail::add_to_acc(h, model.accs_[truth], 1.0);
      detail::add_to_acc(h, model.accs_[guess], -1.0);
      model.refresh_norm(truth);
      model.refresh_norm(guess);
    }
    mistakes += epoch_mistakes;
    if (epoch_mistakes == 0) break;  // fixed point
  }
  return mistakes;
}

// ---------------------------------------------------------------------------
// Balanced Winnow.

struct WinnowConfig {
  double threshold = 0.0;  // 0 selects the default d/2
  double factor = 2.0;     // promotion multiplier; demotion divides by it
};

// Positive-weight multiplicative learner over 2d balanced features: bipolar
// inputs map through (1+v)/2 with the complements appended, sparse {0,1}
// inputs analogously. Weights stay strictly positive; updates multiply by
// exactly the factor or its inverse.
class WinnowModel {
 public:
  explicit WinnowModel(std::uint32_t dim, WinnowConfig cfg = {})
      : dim_(dim),
        threshold_(cfg.threshold > 0 ? cfg.threshold : 0.5 * dim),
        factor_(cfg.factor),
        weights_(2 * static_cast<std::size_t>(dim), 1.0) {
    if (dim < 1) throw std::invalid_argument("winnow: dim >= 1");
    if (!(factor_ > 1.0)) throw std::invalid_argument("winnow: factor > 1");
  }

  std::uint32_t dim() const noexcept { return dim_; }
  double threshold() const noexcept { return threshold_; }
  double factor() const noexcept { return factor_; }
  std::uint64_t mistake_count() const noexcept { return mistakes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  int predict(const Hypervector& v) const {
    return activation(v) >= threshold_ ? +1 : -1;
  }

  // One online step; returns true when the example was a mistake.
  bool learn(const Hypervector& v, int label) {
    if (label != 1 && label != -1) throw std::invalid_argument("winnow: labels are +1/-1");
    const int guess = predict(v);
    if (guess == label) return false;
    ++mistakes_;
    const double mult = label > 0 ? factor_ : 1.0 / factor_;
    for_active(v, [&](std::size_t i) { weights_[i] *= mult; });
    return true;
  }

  static WinnowModel restore(std::uint32_t dim, double threshold, double factor,
                             std::uint64_t mistakes, std::vector<double> weights) {
    WinnowConfig cfg;
    cfg.threshold = threshold;
    cfg.factor = factor;
    WinnowModel m(dim, cfg);
    if (weights.size() != 2 * static_cast<std::size_t>(dim)) {
      throw std::invalid_argument("winnow restore: weight size mismatch");
    }
    m.weights_ = std::move(weights);
    m.mistakes_ = mistakes;
    return m;
  }

 private:
  template <typename Fn>
  void for_active(const Hypervector& v, Fn&& fn) const {
    if (v.dim() != dim_) throw std::invalid_argument("winnow: dimension mismatch");
    switch (v.storage()) {
      case Storage::DenseBipolar: {
        auto s = v.as_bipolar();
        for (std::size_t i = 0; i < s.size(); ++i) fn(s[i] > 0 ? i : dim_ + i);
        return;
      }
      case Storage::SparseBinary: {
        std::size_t next = 0;
        for (auto idx : v.as_sparse()) {
          for (; next < idx; ++next) fn(dim_ + next);
          fn(idx);
          next = idx + 1;
        }
        for (; next < dim_; ++next) fn(dim_ + next);
        return;
      }
      default:
        throw std::invalid_argument("winnow: inputs must be bipolar or sparse binary");
    }
  }

  double activation(const Hypervector& v) const {
    double a = 0.0;
    for_active(v, [&](std::size_t i) { a += weights_[i]; });
    return a;
  }

  std::uint32_t dim_;
  double threshold_;
  double factor_;
  std::uint64_t mistakes_ = 0;
  std::vector<double> weights_;
};

inline WinnowModel winnow_train(std::span<const std::pair<Hypervector, int>> stream,
                                WinnowConfig cfg = {}) {
  if (stream.empty()) throw std::invalid_argument("winnow_train: empty stream");
  WinnowModel m(stream.front().first.dim(), cfg);
  for (const auto& [v, y] : stream) m.learn(v, y);
  return m;
}

// ---------------------------------------------------------------------------
// Closest-pair separating function (one-sided guarantee).

struct SeparatingFunction {
  Hypervector phi_p;
  Hypervector phi_q;
  double bias = 0.0;  // (||phi(p)||^2 - ||phi(q)||^2) / 2
  std::size_t p_index = 0;
  std::size_t q_index = 0;
  double closest_sq_dist = 0.0;   // ||p - q||^2
  double beta_over_alpha = 0.0;   // measured on the evaluation pairs
  bool condition_met = false;     // beta/alpha < ||p - q||^2 / 2

  double value(const Hypervector& hx) const {
    if (hx.storage() == phi_p.storage()) {
      return dot(hx, phi_p) - dot(hx, phi_q) - bias;
    }
    const Hypervector hr = promote_to_real(hx);
    return dot(hr, promote_to_real(phi_p)) - dot(hr, promote_to_real(phi_q)) - bias;
  }
};

namespace detail {
inline double sq_l2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}
}  // namespace detail

// f(x) = <phi(x), phi(p) - phi(q)> - (||phi(p)||^2 - ||phi(q)||^2)/2 for the
// closest cross pair (p, q), found by brute force. alpha and beta are fitted
// over exactly the pairs the guarantee quantifies over: (x, p) and (x, q)
// for every x in P and Q, with squared L2 on both sides. Whenever
// beta/alpha < ||p-q||^2 / 2 holds with the measured values, f sign-separates
// the encoded sets; otherwise the report is diagnostic only.
template <typename EncodeFn>
SeparatingFunction separating_function(std::span<const std::vector<double>> P,
                                       std::span<const std::vector<double>> Q,
                                       EncodeFn&& encode) {
  if (P.empty() || Q.empty()) throw std::invalid_argument("separating_function: empty sets");
  SeparatingFunction f;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (std::size_t j = 0; j < Q.size(); ++j) {
      const double sq = detail::sq_l2(P[i], Q[j]);
      if (sq < best) {
        best = sq;
        f.p_index = i;
        f.q_index = j;
      }
    }
  }
  if (best == 0.0) {
    throw std::invalid_argument("separating_function: point sets overlap (zero distance)");
  }
  f.closest_sq_dist = best;
  const auto& p = P[f.p_index];
  const auto& q = Q[f.q_index];
  f.phi_p = encode(std::span<const double>(p));
  f.phi_q = encode(std::span<const double>(q));
  f.bias = 0.5 * (norm2_sq(f.phi_p) - norm2_sq(f.phi_q));

  std::vector<double> dxs, dhs;
  auto add_pair = [&](std::span<const double> x, const Hypervector& hx,
                      std::span<const double> anchor, const Hypervector& h_anchor) {
    dxs.push_back(detail::sq_l2(x, anchor));
    dhs.push_back(code_distance(hx, h_anchor, CodeMetric::SqEuclid));
  };
  for (const auto& set : {P, Q}) {
    for (const auto& x : set) {
      const Hypervector hx = encode(std::span<const double>(x));
      add_pair(x, hx, p, f.phi_p);
      add_pair(x, hx, q, f.phi_q);
    }
  }
  double sxx = 0.0, sxh = 0.0;
  for (std::size_t i = 0; i < dxs.size(); ++i) {
    sxx += dxs[i] * dxs[i];
    sxh += dxs[i] * dhs[i];
  }
  const double alpha = sxx > 0 ? sxh / sxx : 0.0;
  double beta = 0.0;
  for (std::size_t i = 0; i < dxs.size(); ++i) {
    beta = std::max(beta, std::abs(dhs[i] - alpha * dxs[i]));
  }
  f.beta_over_alpha = alpha > 0 ? beta / alpha : std::numeric_limits<double>::infinity();
  f.condition_met = f.beta_over_alpha < 0.5 * f.closest_sq_dist;
  return f;
}

// ---------------------------------------------------------------------------
// Planted sparse separators over random projections.

struct SparseSeparatorConfig {
  double multiplier = 1.0;        // scales the Omega(.) dimension formula
  std::uint64_t d_cap = 1000000;  // refuse larger d with a diagnostic
  std::uint32_t points = 200;
  bool inject_planted = false;    // replace one projection row with w itself
};

struct SparseSeparatorReport {
  std::uint32_t n = 0, k = 0;
  double gamma = 0.0;
  std::uint64_t d = 0;
  std::uint32_t trials = 0;
  double success_rate = 0.0;
  double required_rho = 0.0;      // 1 / (gamma sqrt(k))
  double min_selected_rho = 0.0;  // min over trials of the weakest selected row
  double mean_selected_rho = 0.0;
  std::vector<char> successes;        // per trial
  std::vector<double> trial_min_rho;  // per trial
};

namespace detail {
inline std::vector<double> random_unit(rng::SplitMix& g, std::uint32_t n) {
  std::vector<double> v(n);
  double nrm = 0.0;
  do {
    nrm = 0.0;
    for (auto& x : v) {
      x = g.next_gaussian();
      nrm += x * x;
    }
  } while (nrm == 0.0);
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  return v;
}
}  // namespace detail

// Synthesizes a planted unit-norm separator w and gamma-margin data on the
// sphere, samples Phi with d = ceil(multiplier * k * exp(n/(2 k gamma^2))),
// selects the k rows most correlated with w, and tests whether their sum
// sign-separates the data. Reports the success rate and how the selected
// rows compare against the rho >= 1/(gamma sqrt(k)) requirement.
inline SparseSeparatorReport sparse_separator_experiment(std::uint32_t n, std::uint32_t k,
                                                         double gamma, std::uint32_t trials,
                                                         std::uint64_t seed,
                                                         SparseSeparatorConfig cfg = {}) {
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("sparse separator: gamma in (0,1)");
  if (k < 1 || n < 2 || trials < 1) {
    throw std::invalid_argument("sparse separator: need k >= 1, n >= 2, trials >= 1");
  }
  const double d_real =
      cfg.multiplier * static_cast<double>(k) *
      std::exp(static_cast<double>(n) / (2.0 * static_cast<double>(k) * gamma * gamma));
  if (!(d_real <= static_cast<double>(cfg.d_cap))) {
    throw std::invalid_argument("sparse separator: required d = " + std::to_string(d_real) +
                                " exceeds cap " + std::to_string(cfg.d_cap) +
                                " (gamma too small for this n, k)");
  }
  const auto d = static_cast<std::uint64_t>(std::ceil(d_real));

  SparseSeparatorReport rep;
  rep.n = n;
  rep.k = k;
  rep.gamma = gamma;
  rep.d = d;
  rep.trials = trials;
  rep.required_rho = 1.0 / (gamma * std::sqrt(static_cast<double>(k)));
  rep.min_selected_rho = std::numeric_limits<double>::infinity();

  std::uint32_t wins = 0;
  double rho_sum = 0.0;
  for (std::uint32_t t = 0; t < trials; ++t) {
    rng::SplitMix g(rng::trial_seed(seed, t));
    const auto w = detail::random_unit(g, n);

    // gamma-margin points: x = s*w + sqrt(1-s^2)*v with |s| >= gamma, v _|_ w.
    std::vector<std::vector<double>> xs(cfg.points);
    std::vector<int> ys(cfg.points);
    for (std::uint32_t i = 0; i < cfg.points; ++i) {
      const double sign = g.next_unit() < 0.5 ? -1.0 : 1.0;
      const double s = sign * (gamma + (1.0 - gamma) * g.next_unit());
      auto v = detail::random_unit(g, n);
      double vw = 0.0;
      for (std::uint32_t j = 0; j < n; ++j) vw += v[j] * w[j];
      double vn = 0.0;
      for (std::uint32_t j = 0; j < n; ++j) {
        v[j] -= vw * w[j];
        vn += v[j] * v[j];
      }
      vn = std::sqrt(vn);
      std::vector<double> x(n);
      const double t2 = std::sqrt(std::max(0.0, 1.0 - s * s));
      for (std::uint32_t j = 0; j < n; ++j) {
        x[j] = s * w[j] + (vn > 0 ? t2 * v[j] / vn : 0.0);
      }
      xs[i] = std::move(x);
      ys[i] = s >= 0 ? +1 : -1;
    }

    // Projection rows and their correlation with w; keep the k best.
    std::vector<std::pair<double, std::vector<double>>> best;  // (rho, row), ascending
    for (std::uint64_t r = 0; r < d; ++r) {
      auto row = detail::random_unit(g, n);
      if (cfg.inject_planted && r == 0) row = w;
      double rho = 0.0;
      for (std::uint32_t j = 0; j < n; ++j) rho += row[j] * w[j];
      if (best.size() < k) {
        best.emplace_back(rho, std::move(row));
        std::sort(best.begin(), best.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      } else if (rho > best.front().first) {
        best.front() = {rho, std::move(row)};
        std::sort(best.begin(), best.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
      }
    }
    const double trial_min = best.front().first;
    rep.trial_min_rho.push_back(trial_min);
    rep.min_selected_rho = std::min(rep.min_selected_rho, trial_min);
    rho_sum += trial_min;

    std::vector<double> u(n, 0.0);
    for (const auto& [rho, row] : best) {
      for (std::uint32_t j = 0; j < n; ++j) u[j] += row[j];
    }
    bool ok = true;
    for (std::uint32_t i = 0; i < cfg.points && ok; ++i) {
      double s = 0.0;
      for (std::uint32_t j = 0; j < n; ++j) s += u[j] * xs[i][j];
      ok = (s >= 0 ? +1 : -1) == ys[i];
    }
    rep.successes.push_back(ok ? 1 : 0);
    wins += ok;
  }
  rep.success_rate = static_cast<double>(wins) / trials;
  rep.mean_selected_rho = rho_sum / trials;
  return rep;
}

}  // namespace hdc
