#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hdc/codebook.hpp"

using namespace hdc;

namespace {

Codebook orthogonal_codebook(std::uint32_t m, std::uint32_t d, std::int32_t scale) {
  std::vector<Hypervector> rows;
  for (std::uint32_t i = 0; i < m; ++i) {
    std::vector<std::int32_t> v(d, 0);
    v[i] = scale;
    rows.push_back(Hypervector::integer(std::move(v), scale));
  }
  return Codebook::from_vectors(CodebookKind::DenseBipolar, 0, std::move(rows));
}

TEST(CodebookGenerate, SingleBipolarVector) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 1, 8, 0);
  ASSERT_EQ(cb.m(), 1u);
  for (auto x : cb.codeword(0).as_bipolar()) EXPECT_TRUE(x == 1 || x == -1);
  EXPECT_DOUBLE_EQ(cb.min_norm_sq(), 8.0);
  EXPECT_DOUBLE_EQ(cb.kappa(), 1.0);
  EXPECT_THROW(cb.incoherence(), std::invalid_argument);  // needs m >= 2
}

TEST(CodebookGenerate, InvalidParameters) {
  EXPECT_THROW(Codebook::generate(CodebookKind::DenseBipolar, 0, 8, 0), std::invalid_argument);
  CodebookParams p;
  p.kind = CodebookKind::SparseBinary;
  p.m = 2;
  p.d = 16;
  p.density = 0.0;
  EXPECT_THROW(Codebook::generate(p), std::invalid_argument);
  p.density = 1.5;
  EXPECT_THROW(Codebook::generate(p), std::invalid_argument);
}

TEST(CodebookGenerate, RegenerationIsBitIdentical) {
  CodebookParams p;
  p.kind = CodebookKind::Gaussian;
  p.m = 7;
  p.d = 129;
  p.seed = 42;
  const auto a = Codebook::generate(p);
  const auto b = Codebook::generate(p);
  ASSERT_EQ(a.m(), b.m());
  for (std::uint32_t i = 0; i < a.m(); ++i) EXPECT_EQ(a.codeword(i), b.codeword(i));
  EXPECT_EQ(a.identity(), b.identity());
  p.seed = 43;
  const auto c = Codebook::generate(p);
  EXPECT_NE(a.codeword(0), c.codeword(0));
  EXPECT_NE(a.identity(), c.identity());
}

// Counter-based RNG: a single codeword entry is recomputable without
// materializing the codebook.
TEST(CodebookGenerate, EntriesAddressableByCounter) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 5, 200, 77);
  for (std::uint32_t a = 0; a < 5; ++a) {
    for (std::uint32_t c = 0; c < 200; c += 17) {
      EXPECT_EQ(cb.codeword(a).as_bipolar()[c], rng::bipolar_entry(77, a, c));
    }
  }
}

// For bipolar codebooks every pairwise dot has the same parity as d.
TEST(CodebookGenerate, BipolarPairwiseDotParity) {
  for (std::uint32_t d : {63u, 64u}) {
    const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 8, d, 5);
    for (std::uint32_t a = 0; a < 8; ++a) {
      for (std::uint32_t b = a + 1; b < 8; ++b) {
        const auto v = static_cast<std::int64_t>(dot(cb.codeword(a), cb.codeword(b)));
        EXPECT_EQ(((v % 2) + 2) % 2, d % 2);
      }
    }
  }
}

// Gaussian codeword squared norms concentrate: all of m=50 lie within
// d +- 4 sqrt(2d) in at least 99% of 1000 seeds.
TEST(CodebookGenerate, GaussianNormsConcentrate) {
  const std::uint32_t m = 50, d = 4096;
  const double slack = 4.0 * std::sqrt(2.0 * d);
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CodebookParams p;
    p.kind = CodebookKind::Gaussian;
    p.m = m;
    p.d = d;
    p.seed = seed;
    const auto cb = Codebook::generate(p);
    bool all_in = true;
    for (const auto& v : cb.vectors()) {
      const double sq = norm2_sq(v);
      all_in = all_in && std::abs(sq - static_cast<double>(d)) <= slack;
    }
    ok += all_in;
  }
  EXPECT_GE(ok, 990);
}

// Sparse supports are Binomial(d, p): an exact-tail interval with total mass
// <= 1e-9 per row must contain every support size.
TEST(CodebookGenerate, SparseSupportBinomiallyConcentrated) {
  const std::uint32_t m = 10, d = 10000;
  const double p = 0.01;
  // exact binomial tail scan via log-pmf
  std::vector<double> logpmf(d + 1);
  const double lp = std::log(p), lq = std::log1p(-p);
  double lchoose = 0.0;  // log C(d, 0)
  logpmf[0] = d * lq;
  for (std::uint32_t k = 1; k <= d; ++k) {
    lchoose += std::log(static_cast<double>(d - k + 1)) - std::log(static_cast<double>(k));
    logpmf[k] = lchoose + k * lp + (d - k) * lq;
  }
  std::uint32_t lo = 0, hi = d;
  double mass = 0.0;
  for (std::uint32_t k = 0; k <= d; ++k) {
    mass += std::exp(logpmf[k]);
    if (mass > 1e-9) {
      lo = k;
      break;
    }
  }
  mass = 0.0;
  for (std::uint32_t k = d; k != 0; --k) {
    mass += std::exp(logpmf[k]);
    if (mass > 1e-9) {
      hi = k;
      break;
    }
  }
  ASSERT_LT(lo, 100u);
  ASSERT_GT(hi, 100u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CodebookParams cp;
    cp.kind = CodebookKind::SparseBinary;
    cp.m = m;
    cp.d = d;
    cp.density = p;
    cp.seed = seed;
    const auto cb = Codebook::generate(cp);
    for (const auto& v : cb.vectors()) {
      const auto w = static_cast<std::uint32_t>(v.as_sparse().size());
      EXPECT_GE(w, lo);
      EXPECT_LE(w, hi);
    }
  }
}

TEST(CodebookGenerate, FixedWeightVariantHasExactSupport) {
  CodebookParams p;
  p.kind = CodebookKind::SparseBinary;
  p.m = 20;
  p.d = 1000;
  p.density = 0.02;
  p.fixed_weight = true;
  p.seed = 3;
  const auto cb = Codebook::generate(p);
  for (const auto& v : cb.vectors()) EXPECT_EQ(v.as_sparse().size(), 20u);
  EXPECT_DOUBLE_EQ(cb.kappa(), 1.0);
}

TEST(Incoherence, OrthogonalCodebookIsZero) {
  const auto cb = orthogonal_codebook(6, 8, 3);
  EXPECT_DOUBLE_EQ(cb.incoherence(), 0.0);
  EXPECT_DOUBLE_EQ(cb.min_norm(), 3.0);
  EXPECT_DOUBLE_EQ(cb.kappa(), 1.0);
}

TEST(Incoherence, DuplicateCodewordAtLeastOne) {
  std::vector<std::int8_t> row{1, -1, 1, 1};
  std::vector<Hypervector> rows{Hypervector::bipolar(row), Hypervector::bipolar(row),
                                Hypervector::bipolar({-1, -1, 1, -1})};
  const auto cb = Codebook::from_vectors(CodebookKind::DenseBipolar, 0, std::move(rows));
  EXPECT_GE(cb.incoherence(), 1.0);
}

// incoherence() equals a brute-force reference loop over all pairs.
TEST(Incoherence, MatchesBruteForceReference) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 12, 512, 9);
  double ref = 0.0;
  for (std::uint32_t a = 0; a < cb.m(); ++a) {
    for (std::uint32_t b = 0; b < cb.m(); ++b) {
      if (a == b) continue;
      double acc = 0.0;
      for (std::uint32_t i = 0; i < cb.d(); ++i) {
        acc += static_cast<double>(cb.codeword(a).as_bipolar()[i]) *
               cb.codeword(b).as_bipolar()[i];
      }
      ref = std::max(ref, std::abs(acc));
    }
  }
  EXPECT_DOUBLE_EQ(cb.incoherence(), ref / 512.0);
}

// mu_emp <= sqrt(2 ln(m^2/0.01) / d) in >= 99% of seeds at m=100, d=10000.
TEST(Incoherence, BipolarConcentrationBound) {
  const std::uint32_t m = 100, d = 10000;
  const double bound = std::sqrt(2.0 * std::log(static_cast<double>(m) * m / 0.01) / d);
  EXPECT_NEAR(bound, 0.0526, 0.0005);
  int ok = 0;
  const int seeds = 100;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto cb = Codebook::generate(CodebookKind::DenseBipolar, m, d, seed);
    ok += cb.incoherence() <= bound;
  }
  EXPECT_GE(ok, 99);
}

TEST(SubsetIncoherence, OrthogonalIsZeroAndSingletonMatchesPairs) {
  const auto cb = orthogonal_codebook(8, 16, 2);
  EXPECT_DOUBLE_EQ(subset_incoherence_estimate(cb, 3, 20, 1), 0.0);
  // s = 1: each trial is a single-pair dot, so the max is <= mu_emp
  const auto rand_cb = Codebook::generate(CodebookKind::DenseBipolar, 30, 256, 11);
  EXPECT_LE(subset_incoherence_estimate(rand_cb, 1, 50, 2), rand_cb.incoherence() + 1e-12);
  EXPECT_THROW(subset_incoherence_estimate(rand_cb, 30, 5, 0), std::invalid_argument);
}

// tau_emp < 1/2 in >= 99% of trials at the pointwise operating point.
TEST(SubsetIncoherence, PointwiseScaleKeepsTauBelowHalf) {
  const std::uint32_t m = 1000, s = 50;
  const auto d = static_cast<std::uint32_t>(
      dimension_for(s, m, 0.01, SizingRegime::Pointwise));
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, m, d, 21);
  const auto taus = subset_incoherence_trials(cb, s, 200, 5);
  int ok = 0;
  for (double t : taus) ok += t < 0.5;
  EXPECT_GE(ok, 198);
}

TEST(DimensionFor, ClosedFormsAndValidation) {
  // ceil(8 * 1 * ln(2^2 / 0.25)) = ceil(8 ln 16) = ceil(22.18) = 23
  EXPECT_EQ(dimension_for(1, 2, 0.25, SizingRegime::Uniform), 23u);
  // exact arithmetic of the closed forms at the acceptance operating points
  EXPECT_EQ(dimension_for(5, 100, 0.05, SizingRegime::Uniform), 2442u);
  EXPECT_EQ(dimension_for(50, 1000, 0.01, SizingRegime::Pointwise), 4883u);
  EXPECT_THROW(dimension_for(0, 2, 0.5, SizingRegime::Uniform), std::invalid_argument);
  EXPECT_THROW(dimension_for(1, 1, 0.5, SizingRegime::Uniform), std::invalid_argument);
  EXPECT_THROW(dimension_for(1, 2, 0.0, SizingRegime::Uniform), std::invalid_argument);
  EXPECT_THROW(dimension_for(1, 2, 1.0, SizingRegime::Uniform), std::invalid_argument);
}

TEST(DimensionFor, Monotonicity) {
  for (auto regime : {SizingRegime::Uniform, SizingRegime::Pointwise}) {
    EXPECT_LE(dimension_for(4, 100, 0.05, regime), dimension_for(5, 100, 0.05, regime));
    EXPECT_LE(dimension_for(5, 100, 0.05, regime), dimension_for(5, 200, 0.05, regime));
    EXPECT_GE(dimension_for(5, 100, 0.01, regime), dimension_for(5, 100, 0.05, regime));
  }
}

}  // namespace
