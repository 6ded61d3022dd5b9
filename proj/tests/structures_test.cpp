#include <gtest/gtest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "hdc/structures.hpp"

using namespace hdc;

namespace {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

Codebook orthogonal_values(std::uint32_t m, std::uint32_t d, std::int32_t scale) {
  std::vector<Hypervector> rows;
  for (std::uint32_t i = 0; i < m; ++i) {
    std::vector<std::int32_t> v(d, 0);
    v[i] = scale;
    rows.push_back(Hypervector::integer(std::move(v), scale));
  }
  return Codebook::from_vectors(CodebookKind::DenseBipolar, 0, std::move(rows));
}

StructureCodec random_codec(std::uint32_t m, std::uint32_t n, std::uint32_t d,
                            std::uint64_t seed) {
  return StructureCodec(Codebook::generate(CodebookKind::DenseBipolar, m, d, seed),
                        Codebook::generate(CodebookKind::DenseBipolar, n, d, seed + 1));
}

TEST(StructureCodec, ValidatesCodebooks) {
  auto values = Codebook::generate(CodebookKind::DenseBipolar, 4, 64, 1);
  auto features = Codebook::generate(CodebookKind::DenseBipolar, 3, 64, 2);
  EXPECT_NO_THROW(StructureCodec(values, features));
  auto wrong_dim = Codebook::generate(CodebookKind::DenseBipolar, 3, 32, 2);
  EXPECT_THROW(StructureCodec(values, wrong_dim), std::invalid_argument);
  CodebookParams gp;
  gp.kind = CodebookKind::Gaussian;
  gp.m = 3;
  gp.d = 64;
  EXPECT_THROW(StructureCodec(values, Codebook::generate(gp)), std::invalid_argument);
}

TEST(EncodeStructure, EmptySingleAndErrors) {
  const auto codec = random_codec(8, 4, 128, 3);
  const auto empty = encode_structure({}, codec);
  for (auto x : empty.as_integer()) EXPECT_EQ(x, 0);
  const std::vector<Pair> one{{2, 5}};
  const auto h = encode_structure(one, codec);
  EXPECT_DOUBLE_EQ(norm2(h), norm2(codec.value_cb.codeword(5)));
  EXPECT_EQ(promote_to_integer(bind(codec.value_cb.codeword(5), codec.feature_cb.codeword(2))),
            h);
  const std::vector<Pair> repeated{{1, 0}, {1, 3}};
  EXPECT_THROW(encode_structure(repeated, codec), std::invalid_argument);
  const std::vector<Pair> bad_f{{4, 0}};
  EXPECT_THROW(encode_structure(bad_f, codec), std::out_of_range);
  const std::vector<Pair> bad_v{{0, 8}};
  EXPECT_THROW(encode_structure(bad_v, codec), std::out_of_range);
}

// n = 4 record equals a scalar reference loop.
TEST(EncodeStructure, MatchesScalarReference) {
  const auto codec = random_codec(16, 4, 256, 7);
  const std::vector<Pair> record{{0, 3}, {1, 9}, {2, 14}, {3, 1}};
  const auto h = encode_structure(record, codec);
  for (std::uint32_t i = 0; i < codec.d(); ++i) {
    std::int32_t ref = 0;
    for (const auto& [f, a] : record) {
      ref += static_cast<std::int32_t>(codec.value_cb.codeword(a).as_bipolar()[i]) *
             codec.feature_cb.codeword(f).as_bipolar()[i];
    }
    ASSERT_EQ(h.as_integer()[i], ref);
  }
}

TEST(EncodeStructure, OrderInvariantBitIdentical) {
  const auto codec = random_codec(16, 5, 128, 9);
  const std::vector<Pair> a{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
  const std::vector<Pair> b{{3, 4}, {0, 1}, {4, 5}, {2, 3}, {1, 2}};
  EXPECT_EQ(encode_structure(a, codec), encode_structure(b, codec));
}

// Binding with a common key preserves pairwise similarity exactly.
TEST(Binding, SimilarityPreservedExactly) {
  const auto codec = random_codec(6, 3, 512, 11);
  for (std::uint32_t f = 0; f < 3; ++f) {
    const auto& key = codec.feature_cb.codeword(f);
    for (std::uint32_t a = 0; a < 6; ++a) {
      for (std::uint32_t a2 = 0; a2 < 6; ++a2) {
        EXPECT_DOUBLE_EQ(
            dot(bind(codec.value_cb.codeword(a), key), bind(codec.value_cb.codeword(a2), key)),
            dot(codec.value_cb.codeword(a), codec.value_cb.codeword(a2)));
      }
    }
  }
}

TEST(DecodeFeature, SinglePairAlwaysRecovers) {
  // orthogonal value codebook: exact recovery at any d >= m
  StructureCodec codec(orthogonal_values(4, 16, 2),
                       Codebook::generate(CodebookKind::DenseBipolar, 3, 16, 5));
  for (std::uint32_t f = 0; f < 3; ++f) {
    for (std::uint32_t a = 0; a < 4; ++a) {
      const std::vector<Pair> rec{{f, a}};
      const auto h = encode_structure(rec, codec);
      EXPECT_EQ(decode_feature(h, f, codec), a);
    }
  }
}

// Field recovery at the uniform sizing operating point: all n fields exact
// in >= 99% of seeds.
TEST(DecodeFeature, RecoversAllFieldsAtSizedDimension) {
  const std::uint32_t m = 32, n = 8;
  const auto d =
      static_cast<std::uint32_t>(dimension_for(n, m, 0.01, SizingRegime::Uniform));
  int ok = 0;
  const int seeds = 100;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto codec = random_codec(m, n, d, rng::key2(40, seed));
    rng::SplitMix g(rng::trial_seed(41, seed));
    std::vector<Pair> record;
    for (std::uint32_t f = 0; f < n; ++f) {
      record.emplace_back(f, static_cast<std::uint32_t>(g.bounded(m)));
    }
    const auto h = encode_structure(record, codec);
    bool all = true;
    for (const auto& [f, a] : record) all = all && decode_feature(h, f, codec) == a;
    ok += all;
  }
  EXPECT_GE(ok, 99);
}

// Querying an absent feature never yields a spuriously confident score:
// max score <= n mu_emp L^2 with the measured cross-binding incoherence.
TEST(DecodeFeature, AbsentFeatureScoreBounded) {
  const std::uint32_t m = 16, n = 5, d = 2048;
  const auto codec = random_codec(m, n, d, 51);
  const double mu = binding_incoherence(codec);
  const std::vector<Pair> record{{0, 3}, {1, 7}, {2, 11}, {3, 2}};  // feature 4 absent
  const auto h = encode_structure(record, codec);
  const auto scored = decode_feature_scored(h, 4, codec);
  EXPECT_LE(scored.score, record.size() * mu * codec.value_cb.min_norm_sq() + 1e-9);
}

TEST(StructureOverlap, AgreementCountWithinBound) {
  const std::uint32_t m = 16, n = 10, d = 4096;
  const auto codec = random_codec(m, n, d, 61);
  const double mu = std::max(codec.value_cb.incoherence(), binding_incoherence(codec));
  rng::SplitMix g(62);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Pair> r1, r2;
    std::uint32_t agree = 0;
    for (std::uint32_t f = 0; f < n; ++f) {
      const auto a1 = static_cast<std::uint32_t>(g.bounded(m));
      const auto a2 = static_cast<std::uint32_t>(g.bounded(m));
      r1.emplace_back(f, a1);
      r2.emplace_back(f, a2);
      agree += a1 == a2;
    }
    const auto h1 = encode_structure(r1, codec);
    const auto h2 = encode_structure(r2, codec);
    EXPECT_LE(std::abs(structure_overlap(h1, h2, codec) - agree),
              static_cast<double>(n) * n * mu + 1e-9);
  }
  // identical records sit within n^2 mu of n
  const std::vector<Pair> rec{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5},
                              {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}};
  const auto h = encode_structure(rec, codec);
  EXPECT_LE(std::abs(structure_overlap(h, h, codec) - 10.0), 100.0 * mu + 1e-9);
}

TEST(StructureOverlap, DisjointOrthogonalRecordsAreZero) {
  StructureCodec codec(orthogonal_values(8, 16, 1),
                       Codebook::generate(CodebookKind::DenseBipolar, 2, 16, 3));
  const std::vector<Pair> r1{{0, 0}, {1, 1}};
  const std::vector<Pair> r2{{0, 2}, {1, 3}};
  EXPECT_DOUBLE_EQ(structure_overlap(encode_structure(r1, codec),
                                     encode_structure(r2, codec), codec),
                   0.0);
}

// The measured cross-binding incoherence shrinks as d grows.
TEST(Binding, IncoherenceDecreasesWithDimension) {
  const double mu_small = binding_incoherence(random_codec(8, 4, 512, 70));
  const double mu_large = binding_incoherence(random_codec(8, 4, 8192, 70));
  EXPECT_LT(mu_large, mu_small);
}

TEST(Sequences, WindowLengthOneAndValidation) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 6, 64, 2);
  auto w = window_new(cb, 1);
  w.push(3);
  EXPECT_EQ(w.state(), promote_to_integer(cb.codeword(3)));
  w.push(5);
  EXPECT_EQ(w.state(), promote_to_integer(cb.codeword(5)));
  EXPECT_THROW(window_new(cb, 64), std::invalid_argument);  // n < d required
  CodebookParams gp;
  gp.kind = CodebookKind::Gaussian;
  gp.m = 4;
  gp.d = 64;
  EXPECT_THROW(window_new(Codebook::generate(gp), 2), std::invalid_argument);
  std::vector<std::uint32_t> too_long(64, 0);
  EXPECT_THROW(encode_sequence(too_long, cb), std::invalid_argument);
}

TEST(Sequences, PushMatchesReencodeThroughFillAndEviction) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 12, 256, 8);
  const std::uint32_t n = 5;
  auto w = window_new(cb, n);
  rng::SplitMix g(3);
  std::vector<std::uint32_t> all;
  for (int step = 0; step < 30; ++step) {
    const auto x = static_cast<std::uint32_t>(g.bounded(12));
    all.push_back(x);
    w.push(x);
    const std::size_t len = std::min<std::size_t>(n, all.size());
    const std::vector<std::uint32_t> window_contents(all.end() - len, all.end());
    EXPECT_EQ(w.state(), encode_sequence(window_contents, cb)) << "step " << step;
  }
}

TEST(Sequences, ValueSemanticsPush) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 4, 32, 1);
  const auto w0 = window_new(cb, 2);
  const auto w1 = window_push(w0, 1);
  const auto w2 = window_push(w1, 2);
  const auto w3 = window_push(w2, 3);
  EXPECT_EQ(w0.filled(), 0u);  // originals untouched
  EXPECT_EQ(w3.state(), encode_sequence(std::vector<std::uint32_t>{2, 3}, cb));
}

TEST(Sequences, PositionDecodeSmall) {
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, 6, 128, 9);
  // n = 1 recovers the single symbol for any codebook
  for (std::uint32_t a = 0; a < 6; ++a) {
    const auto h = encode_sequence(std::vector<std::uint32_t>{a}, cb);
    EXPECT_EQ(decode_sequence_position(h, 0, 1, cb), a);
  }
  const auto h = encode_sequence(std::vector<std::uint32_t>{4, 1, 5}, cb);
  EXPECT_THROW(decode_sequence_position(h, 3, 3, cb), std::out_of_range);
}

// m = 26, n = 8, d = 8192: every position recovered in >= 99% of seeds.
TEST(Sequences, PositionDecodeAtScale) {
  const std::uint32_t m = 26, n = 8, d = 8192;
  int ok = 0;
  const int seeds = 100;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto cb = Codebook::generate(CodebookKind::DenseBipolar, m, d, rng::key2(80, seed));
    rng::SplitMix g(rng::trial_seed(81, seed));
    std::vector<std::uint32_t> xs(n);
    for (auto& x : xs) x = static_cast<std::uint32_t>(g.bounded(m));
    const auto h = encode_sequence(xs, cb);
    bool all = true;
    for (std::uint32_t i = 0; i < n; ++i) {
      all = all && decode_sequence_position(h, i, n, cb) == xs[i];
    }
    ok += all;
  }
  EXPECT_GE(ok, 99);
}

// Exhaustive self-shift scan: the measured shift incoherence stays below the
// d/4-exponent tail bound solved at delta = 0.01.
TEST(Sequences, ShiftIncoherenceObeysTail) {
  const std::uint32_t m = 8, d = 2048;
  const auto cb = Codebook::generate(CodebookKind::DenseBipolar, m, d, 90);
  const double measured = shift_incoherence(cb, d - 1);
  const double bound =
      std::sqrt(4.0 * std::log(2.0 * m * m * static_cast<double>(d) / 0.01) / d);
  EXPECT_LE(measured, bound);
  EXPECT_GT(measured, 0.0);
}

}  // namespace
