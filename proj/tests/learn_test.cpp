#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdc/learn.hpp"

using namespace hdc;

namespace {

std::vector<double> random_unit(rng::SplitMix& g, std::uint32_t n) {
  std::vector<double> x(n);
  double nrm = 0.0;
  for (auto& v : x) {
    v = g.next_gaussian();
    nrm += v * v;
  }
  nrm = std::sqrt(nrm);
  for (auto& v : x) v /= nrm;
  return x;
}

// Two spherical Gaussian blobs in R^n, returned as (points, labels).
struct Blobs {
  std::vector<std::vector<double>> points;
  std::vector<std::int32_t> labels;
};

Blobs make_blobs(std::uint32_t n, std::uint32_t per_class, double separation, double sigma,
                 std::uint64_t seed) {
  rng::SplitMix g(seed);
  auto dir = random_unit(g, n);
  Blobs b;
  for (std::uint32_t i = 0; i < 2 * per_class; ++i) {
    const std::int32_t y = i % 2 ? 1 : 0;
    std::vector<double> x(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      x[j] = (y ? 0.5 : -0.5) * separation * dir[j] + sigma * g.next_gaussian();
    }
    b.points.push_back(std::move(x));
    b.labels.push_back(y);
  }
  return b;
}

TEST(Prototypes, SingleExamplePerClassPredictsItself) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 4, 512, 1);
  PrototypeModel m;
  for (std::uint32_t a = 0; a < 4; ++a) m.add(cb.codeword(a), static_cast<std::int32_t>(a));
  for (std::uint32_t a = 0; a < 4; ++a) {
    EXPECT_EQ(m.predict(cb.codeword(a)), static_cast<std::int32_t>(a));
  }
  EXPECT_THROW(PrototypeModel{}.predict(cb.codeword(0)), std::logic_error);
}

// Duplicating the whole training stream scales every prototype by 2 and
// changes no prediction (normalization in the score).
TEST(Prototypes, UniformDuplicationInvariant) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 20, 256, 2);
  rng::SplitMix g(3);
  std::vector<std::pair<Hypervector, std::int32_t>> stream;
  for (int i = 0; i < 12; ++i) {
    stream.emplace_back(cb.codeword(static_cast<std::uint32_t>(g.bounded(20))),
                        static_cast<std::int32_t>(g.bounded(3)));
  }
  auto once = train_prototypes(stream);
  auto doubled_stream = stream;
  doubled_stream.insert(doubled_stream.end(), stream.begin(), stream.end());
  auto twice = train_prototypes(doubled_stream);
  for (std::uint32_t a = 0; a < 20; ++a) {
    EXPECT_EQ(once.predict(cb.codeword(a)), twice.predict(cb.codeword(a)));
  }
  // and scaled norms: ||2c|| = 2||c||
  for (std::size_t k = 0; k < once.num_classes(); ++k) {
    EXPECT_DOUBLE_EQ(twice.norm(k), 2.0 * once.norm(k));
  }
}

// Training is order-independent for integer-valued encodings: bit-identical
// prototypes under stream permutation.
TEST(Prototypes, OrderIndependentForIntegerStreams) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 30, 128, 4);
  rng::SplitMix g(5);
  std::vector<std::pair<Hypervector, std::int32_t>> stream;
  for (int i = 0; i < 25; ++i) {
    stream.emplace_back(cb.codeword(static_cast<std::uint32_t>(g.bounded(30))),
                        static_cast<std::int32_t>(g.bounded(2)));
  }
  auto shuffled = stream;
  // permute but keep the first-appearance order of the two labels
  std::swap(shuffled[2], shuffled[10]);
  std::swap(shuffled[5], shuffled[20]);
  const auto a = train_prototypes(stream);
  const auto b = train_prototypes(shuffled);
  ASSERT_EQ(a.num_classes(), b.num_classes());
  for (std::size_t k = 0; k < a.num_classes(); ++k) {
    EXPECT_EQ(a.prototype(k), b.prototype(k));
  }
}

// SRP-encoded blobs: prototype accuracy within 5 points of the raw-space
// nearest-centroid oracle.
TEST(Prototypes, TracksRawNearestCentroidOnBlobs) {
  const std::uint32_t n = 16, d = 4096, per_class = 150;
  const auto train = make_blobs(n, per_class, 3.0, 1.0, 6);
  const auto test = make_blobs(n, per_class, 3.0, 1.0, 7);
  const auto enc = SrpEncoder::create(n, d, 8);

  PrototypeModel model;
  std::vector<std::vector<double>> centroids(2, std::vector<double>(n, 0.0));
  std::vector<int> counts(2, 0);
  for (std::size_t i = 0; i < train.points.size(); ++i) {
    model.add(srp_encode(train.points[i], enc), train.labels[i]);
    for (std::uint32_t j = 0; j < n; ++j) {
      centroids[train.labels[i]][j] += train.points[i][j];
    }
    counts[train.labels[i]] += 1;
  }
  for (int k = 0; k < 2; ++k) {
    for (auto& v : centroids[k]) v /= counts[k];
  }
  int enc_ok = 0, raw_ok = 0;
  for (std::size_t i = 0; i < test.points.size(); ++i) {
    enc_ok += model.predict(srp_encode(test.points[i], enc)) == test.labels[i];
    double d0 = 0, d1 = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
      d0 += (test.points[i][j] - centroids[0][j]) * (test.points[i][j] - centroids[0][j]);
      d1 += (test.points[i][j] - centroids[1][j]) * (test.points[i][j] - centroids[1][j]);
    }
    raw_ok += (d1 < d0 ? 1 : 0) == test.labels[i];
  }
  const double enc_acc = static_cast<double>(enc_ok) / test.points.size();
  const double raw_acc = static_cast<double>(raw_ok) / test.points.size();
  EXPECT_GE(enc_acc, raw_acc - 0.05);
}

TEST(Perceptron, FixedPointWhenNoMistakes) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 6, 1024, 9);
  std::vector<std::pair<Hypervector, std::int32_t>> stream;
  for (std::uint32_t a = 0; a < 6; ++a) {
    stream.emplace_back(cb.codeword(a), static_cast<std::int32_t>(a % 2));
  }
  auto model = train_prototypes(stream);
  const auto before0 = model.prototype(0);
  const auto before1 = model.prototype(1);
  // separable here: bundled prototypes already classify their own examples
  const auto mistakes = perceptron_finetune(model, stream, 3);
  EXPECT_EQ(mistakes, 0u);
  EXPECT_EQ(model.prototype(0), before0);
  EXPECT_EQ(model.prototype(1), before1);
}

// Separable encoded data: converges within the perceptron mistake budget
// (2R/gamma)^2 computed from the measured separator margin.
TEST(Perceptron, ConvergesWithinMeasuredMistakeBudget) {
  const std::uint32_t n = 8, d = 2048;
  const auto blobs = make_blobs(n, 60, 4.0, 0.6, 10);
  const auto enc = SrpEncoder::create(n, d, 11);
  std::vector<std::pair<Hypervector, std::int32_t>> stream;
  for (std::size_t i = 0; i < blobs.points.size(); ++i) {
    stream.emplace_back(srp_encode(blobs.points[i], enc), blobs.labels[i]);
  }
  // measured linear separator on the encodings: w = c1 - c0 direction
  std::vector<double> w(d, 0.0);
  for (const auto& [h, y] : stream) {
    detail::add_to_acc(h, w, y ? 1.0 : -1.0);
  }
  double wn = 0.0;
  for (double v : w) wn += v * v;
  wn = std::sqrt(wn);
  double min_margin = std::numeric_limits<double>::infinity();
  bool separable = true;
  for (const auto& [h, y] : stream) {
    const double s = detail::dot_acc(h, w) / wn * (y ? 1.0 : -1.0);
    separable = separable && s > 0;
    min_margin = std::min(min_margin, s);
  }
  ASSERT_TRUE(separable);  // fixture is built to be separable; R = sqrt(d)
  const double budget = std::pow(2.0 * std::sqrt(static_cast<double>(d)) / min_margin, 2.0);
  PrototypeModel model;  // start from scratch: every class seen via finetune updates
  for (const auto& [h, y] : stream) model.add(h, y);
  const auto mistakes = perceptron_finetune(model, stream, 50);
  EXPECT_LE(static_cast<double>(mistakes), budget);
  // and training accuracy is perfect after convergence
  int ok = 0;
  for (const auto& [h, y] : stream) ok += model.predict(h) == y;
  EXPECT_EQ(ok, static_cast<int>(stream.size()));
}

TEST(Perceptron, LabelNoiseTerminatesAtEpochCap) {
  const std::uint32_t n = 8, d = 512;
  auto blobs = make_blobs(n, 40, 3.0, 0.8, 12);
  rng::SplitMix g(13);
  for (auto& y : blobs.labels) {
    if (g.next_unit() < 0.10) y = 1 - y;  // 10% label noise
  }
  const auto enc = SrpEncoder::create(n, d, 14);
  std::vector<std::pair<Hypervector, std::int32_t>> stream;
  for (std::size_t i = 0; i < blobs.points.size(); ++i) {
    stream.emplace_back(srp_encode(blobs.points[i], enc), blobs.labels[i]);
  }
  auto model = train_prototypes(stream);
  EXPECT_NO_THROW(perceptron_finetune(model, stream, 5));
}

// ---------------------------------------------------------------------------
// Winnow.

Hypervector random_bipolar_hv(rng::SplitMix& g, std::uint32_t d) {
  std::vector<std::int8_t> v(d);
  for (auto& x : v) x = g.next_unit() < 0.5 ? std::int8_t{-1} : std::int8_t{1};
  return Hypervector::bipolar(std::move(v));
}

TEST(Winnow, ValidationAndWeightDiscipline) {
  WinnowModel m(64);
  EXPECT_DOUBLE_EQ(m.threshold(), 32.0);
  rng::SplitMix g(15);
  const auto v = random_bipolar_hv(g, 64);
  EXPECT_THROW(m.learn(v, 0), std::invalid_argument);
  for (int i = 0; i < 40; ++i) {
    m.learn(random_bipolar_hv(g, 64), g.next_unit() < 0.5 ? 1 : -1);
  }
  for (double w : m.weights()) {
    EXPECT_GT(w, 0.0);
    // powers of two only: updates multiply by exactly 2 or 1/2
    const double l = std::log2(w);
    EXPECT_DOUBLE_EQ(l, std::round(l));
  }
  EXPECT_THROW(m.learn(Hypervector::real(std::vector<double>(64, 0.0)), 1),
               std::invalid_argument);
}

// All-same-label streams cost at most a handful of mistakes.
TEST(Winnow, AllSameLabelFewMistakes) {
  const std::uint32_t d = 1024;
  rng::SplitMix g(16);
  {
    WinnowModel m(d);  // all positive: initial activation d >= d/2, zero mistakes
    for (int i = 0; i < 200; ++i) m.learn(random_bipolar_hv(g, d), +1);
    EXPECT_EQ(m.mistake_count(), 0u);
  }
  {
    WinnowModel m(d);  // all negative: total weight halves fast; measured <= 12
    for (int i = 0; i < 200; ++i) m.learn(random_bipolar_hv(g, d), -1);
    EXPECT_LE(m.mistake_count(), 12u);
  }
}

// Single-coordinate target over d = 1024: mistakes bounded by a small
// multiple of log2(d) (measured simulation bound).
TEST(Winnow, SingleLiteralMistakesLogarithmic) {
  const std::uint32_t d = 1024;
  std::uint64_t worst = 0;
  for (std::uint64_t run = 0; run < 10; ++run) {
    rng::SplitMix g(rng::trial_seed(17, run));
    const auto target = static_cast<std::uint32_t>(g.bounded(d));
    WinnowModel m(d);
    for (int i = 0; i < 1500; ++i) {
      const auto v = random_bipolar_hv(g, d);
      m.learn(v, v.as_bipolar()[target] > 0 ? +1 : -1);
    }
    worst = std::max(worst, m.mistake_count());
    // the learned model actually works
    int ok = 0;
    for (int i = 0; i < 200; ++i) {
      const auto v = random_bipolar_hv(g, d);
      ok += m.predict(v) == (v.as_bipolar()[target] > 0 ? +1 : -1);
    }
    EXPECT_GE(ok, 195);
  }
  EXPECT_LE(worst, 4 * 10 + 4);  // 4 log2(1024) + 4
}

// k-literal disjunction over SRP coordinates: mistakes <= 4 k ln d.
TEST(Winnow, DisjunctionMistakeBound) {
  const std::uint32_t d = 4096, n = 32, k = 8;
  const auto enc = SrpEncoder::create(n, d, 18);
  const double budget = 4.0 * k * std::log(static_cast<double>(d));
  for (std::uint64_t run = 0; run < 3; ++run) {
    rng::SplitMix g(rng::trial_seed(19, run));
    auto lits = g.sample_distinct(k, d);
    WinnowModel m(d);
    for (int i = 0; i < 1200; ++i) {
      const auto x = random_unit(g, n);
      const auto h = srp_encode(x, enc);
      int label = -1;
      for (auto c : lits) {
        if (h.as_bipolar()[c] > 0) {
          label = +1;
          break;
        }
      }
      m.learn(h, label);
    }
    EXPECT_LE(static_cast<double>(m.mistake_count()), budget);
  }
}

// ---------------------------------------------------------------------------
// Closest-pair separating function (one-sided guarantee).

TEST(SeparatingFunction, SingletonsAndOverlapError) {
  const auto enc = SrpEncoder::create(4, 1024, 20);
  rng::SplitMix g(21);
  std::vector<std::vector<double>> P{random_unit(g, 4)};
  std::vector<std::vector<double>> Q{random_unit(g, 4)};
  const auto f = separating_function(P, Q, [&](std::span<const double> v) {
    return srp_encode(v, enc);
  });
  EXPECT_GT(f.value(srp_encode(P[0], enc)), 0.0);
  EXPECT_LT(f.value(srp_encode(Q[0], enc)), 0.0);
  std::vector<std::vector<double>> overlapping{P[0]};
  EXPECT_THROW(separating_function(P, overlapping,
                                   [&](std::span<const double> v) {
                                     return srp_encode(v, enc);
                                   }),
               std::invalid_argument);
}

// When the measured condition fails the function is still returned with its
// diagnostics; nothing is asserted about separation (one-sided guarantee).
TEST(SeparatingFunction, ConditionNotMetIsReportOnly) {
  const auto enc = SrpEncoder::create(4, 64, 33);  // tiny d: beta/alpha is large
  rng::SplitMix g(34);
  std::vector<std::vector<double>> P, Q;
  for (int i = 0; i < 6; ++i) {
    P.push_back(random_unit(g, 4));
    auto q = P.back();
    q[0] += 0.05;  // nearly touching sets
    double nrm = 0.0;
    for (double v : q) nrm += v * v;
    nrm = std::sqrt(nrm);
    for (auto& v : q) v /= nrm;
    Q.push_back(std::move(q));
  }
  const auto f = separating_function(P, Q, [&](std::span<const double> v) {
    return srp_encode(v, enc);
  });
  EXPECT_FALSE(f.condition_met);
  EXPECT_GT(f.beta_over_alpha, 0.5 * f.closest_sq_dist);
  EXPECT_GT(f.closest_sq_dist, 0.0);  // diagnostics populated all the same
}

// Whenever the measured condition holds, sign separation is exact.
TEST(SeparatingFunction, ConditionImpliesExactSeparation) {
  const std::uint32_t n = 8, d = 8192;
  const auto enc = SrpEncoder::create(n, d, 22);
  int condition_fired = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto blobs = make_blobs(n, 15, 5.0, 0.45, rng::trial_seed(23, trial));
    std::vector<std::vector<double>> P, Q;
    for (std::size_t i = 0; i < blobs.points.size(); ++i) {
      // keep everything on the unit sphere, where SRP preserves geometry
      auto x = blobs.points[i];
      double nrm = 0.0;
      for (double v : x) nrm += v * v;
      nrm = std::sqrt(nrm);
      for (auto& v : x) v /= nrm;
      (blobs.labels[i] ? P : Q).push_back(std::move(x));
    }
    const auto f = separating_function(P, Q, [&](std::span<const double> v) {
      return srp_encode(v, enc);
    });
    if (!f.condition_met) continue;
    ++condition_fired;
    for (const auto& x : P) EXPECT_GT(f.value(srp_encode(x, enc)), 0.0);
    for (const auto& x : Q) EXPECT_LT(f.value(srp_encode(x, enc)), 0.0);
  }
  EXPECT_GT(condition_fired, 0);
}

// ---------------------------------------------------------------------------
// Planted sparse-separator experiment.

TEST(SparseSeparator, PlantedRowAlwaysSeparates) {
  SparseSeparatorConfig cfg;
  cfg.inject_planted = true;
  cfg.points = 100;
  const auto rep = sparse_separator_experiment(8, 1, 0.9, 10, 24, cfg);
  EXPECT_DOUBLE_EQ(rep.success_rate, 1.0);
}

TEST(SparseSeparator, SingleRowNearWAtFormulaDimension) {
  // k = 1, gamma close to 1: d = exp(n/(2 gamma^2)) rows suffice for a
  // near-separator cap hit often enough to separate in at least half the trials.
  const auto rep = sparse_separator_experiment(4, 1, 0.9, 50, 25);
  EXPECT_EQ(rep.d, static_cast<std::uint64_t>(
                       std::ceil(std::exp(4.0 / (2.0 * 0.81)))));
  EXPECT_GE(rep.success_rate, 0.5);
}

TEST(SparseSeparator, ReportsRhoAgainstRequirement) {
  const auto rep = sparse_separator_experiment(16, 4, 0.5, 50, 26);
  EXPECT_EQ(rep.trials, 50u);
  EXPECT_EQ(rep.successes.size(), 50u);
  EXPECT_DOUBLE_EQ(rep.required_rho, 1.0 / (0.5 * 2.0));
  EXPECT_GT(rep.min_selected_rho, 0.0);  // top-k rows correlate positively
  EXPECT_GE(rep.mean_selected_rho, rep.min_selected_rho);
  EXPECT_GT(rep.success_rate, 0.0);
}

TEST(SparseSeparator, DimensionCapGuard) {
  SparseSeparatorConfig cfg;
  cfg.d_cap = 1000;
  EXPECT_THROW(sparse_separator_experiment(64, 2, 0.1, 5, 27, cfg), std::invalid_argument);
  EXPECT_THROW(sparse_separator_experiment(8, 2, 1.5, 5, 27), std::invalid_argument);
}

}  // namespace
