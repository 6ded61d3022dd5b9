#pragma once

// Set memory: encode finite sets over an alphabet by bundling codewords,
// decode membership by thresholding, estimate cardinalities and overlaps,
// plus the sparse Bloom-filter mode and context-dependent thinning.

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hdc/codebook.hpp"
#include "hdc/hypervector.hpp"
#include "hdc/rng.hpp"

namespace hdc {

enum class Bundling { Sum, Max, Threshold };

struct EncodedSet {
  Hypervector vector;
  std::uint64_t codebook_id = 0;
  Bundling bundling = Bundling::Sum;
  double threshold = 1.0;  // g_t threshold for Bundling::Threshold
  std::optional<std::uint32_t> s_declared;
};

namespace detail {

inline void require_codebook(const EncodedSet& es, const Codebook& cb) {
  if (es.codebook_id != cb.identity()) {
    throw std::invalid_argument("encoded set does not belong to this codebook");
  }
  if (es.vector.dim() != cb.d()) {
    throw std::invalid_argument("encoded set dimension does not match codebook");
  }
}

}  // namespace detail

// phi(S) = bundle of the member codewords. Items must be distinct symbol
// indices. Sum sorts items first so the encoding is bit-identical under any
// input permutation (floating-point sums are order-sensitive).
inline EncodedSet encode_set(std::span<const std::uint32_t> items, const Codebook& cb,
                             Bundling bundling, double threshold_t = 1.0) {
  std::vector<std::uint32_t> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= cb.m()) throw std::out_of_range("encode_set: symbol index out of range");
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::invalid_argument("encode_set: duplicate item");
    }
  }
  EncodedSet es;
  es.codebook_id = cb.identity();
  es.bundling = bundling;
  es.threshold = threshold_t;
  es.s_declared = static_cast<std::uint32_t>(sorted.size());

  if (bundling == Bundling::Max) {
    if (cb.kind() != CodebookKind::SparseBinary) {
      throw std::invalid_argument("encode_set: Max bundling requires a SparseBinary codebook");
    }
    std::vector<Hypervector> members;
    members.reserve(sorted.size());
    for (auto a : sorted) members.push_back(cb.codeword(a));
    es.vector = bundle_max(members, cb.d());
    return es;
  }

  std::vector<Hypervector> members;
  members.reserve(sorted.size());
  for (auto a : sorted) {
    const auto& cw = cb.codeword(a);
    members.push_back(cw.storage() == Storage::SparseBinary ? promote_to_integer(cw) : cw);
  }
  Hypervector sum = bundle_sum(members, cb.d());
  if (bundling == Bundling::Threshold) {
    es.vector = binarize(sum, threshold_t);
  } else {
    es.vector = std::move(sum);
  }
  return es;
}

enum class BloomQueryRule {
  ExactContainment,  // dot == ||phi(a)||_1 (conventional Bloom; zero false negatives)
  HalfMinNormSq,     // dot >= L^2 / 2 (the sum-bundle threshold rule)
};

// Membership test. Sum bundles use the threshold rule dot >= L^2/2 (ties
// accept). Max/Threshold bundles default to exact containment; the L^2/2
// rule is selectable.
inline bool member_query(const EncodedSet& es, std::uint32_t symbol, const Codebook& cb,
                         BloomQueryRule rule = BloomQueryRule::ExactContainment) {
  detail::require_codebook(es, cb);
  if (symbol >= cb.m()) throw std::out_of_range("member_query: symbol index out of range");
  const auto& cw = cb.codeword(symbol);
  const double score = detail::query_dot(cw, es.vector);
  if (es.bundling == Bundling::Sum) {
    return score >= 0.5 * cb.min_norm_sq();
  }
  if (rule == BloomQueryRule::ExactContainment) {
    if (cw.storage() != Storage::SparseBinary) {
      throw std::invalid_argument("member_query: exact containment needs sparse codewords");
    }
    return score == static_cast<double>(cw.as_sparse().size());
  }
  return score >= 0.5 * cb.min_norm_sq();
}

inline std::vector<std::uint32_t> decode_set(const EncodedSet& es, const Codebook& cb,
                                             BloomQueryRule rule =
                                                 BloomQueryRule::ExactContainment) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t a = 0; a < cb.m(); ++a) {
    if (member_query(es, a, cb, rule)) out.push_back(a);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cardinality and overlap estimators (Sum bundles only).

inline double size_estimate(const EncodedSet& es, const Codebook& cb) {
  detail::require_codebook(es, cb);
  if (es.bundling != Bundling::Sum) {
    throw std::invalid_argument("size_estimate: defined for Sum bundles only");
  }
  return norm2_sq(es.vector) / cb.min_norm_sq();
}

inline double intersection_estimate(const EncodedSet& a, const EncodedSet& b,
                                    const Codebook& cb) {
  detail::require_codebook(a, cb);
  detail::require_codebook(b, cb);
  if (a.bundling != Bundling::Sum || b.bundling != Bundling::Sum) {
    throw std::invalid_argument("intersection_estimate: defined for Sum bundles only");
  }
  return dot(a.vector, b.vector) / cb.min_norm_sq();
}

inline double union_estimate(const EncodedSet& a, const EncodedSet& b, const Codebook& cb) {
  return size_estimate(a, cb) + size_estimate(b, cb) - intersection_estimate(a, b, cb);
}

// ---------------------------------------------------------------------------
// Bloom-filter calibration.

// Optimal per-coordinate density for sets of size s.
inline double bloom_density(std::uint32_t s) {
  if (s < 1) throw std::invalid_argument("bloom_density: s must be >= 1");
  return std::numbers::ln2 / static_cast<double>(s);
}

// Classical Bloom calibration: d = ceil(1.443 * s * log2(1/delta)), the
// smallest filter with false-positive rate <= delta at optimal density.
inline std::uint32_t bloom_dimension(std::uint32_t s, double delta) {
  if (s < 1) throw std::invalid_argument("bloom_dimension: s must be >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("bloom_dimension: delta in (0,1)");
  const double bits = static_cast<double>(s) * std::log(1.0 / delta) /
                      (std::numbers::ln2 * std::numbers::ln2);
  return static_cast<std::uint32_t>(std::ceil(bits));
}

// ---------------------------------------------------------------------------
// Context-dependent thinning.

// Each round intersects the vector with a seeded pseudorandom permutation of
// itself: support' = { i in support : perm_r(i) in support }. Density is
// non-increasing per round; one round on density-q input lands near q^2.
inline Hypervector cdt_thin(const Hypervector& v, std::uint32_t rounds, std::uint64_t perm_seed) {
  if (v.storage() != Storage::SparseBinary) {
    throw std::invalid_argument("cdt_thin: requires SparseBinary input");
  }
  const std::uint32_t d = v.dim();
  std::vector<std::uint32_t> support(v.as_sparse().begin(), v.as_sparse().end());
  for (std::uint32_t r = 0; r < rounds && !support.empty(); ++r) {
    const auto perm = rng::random_permutation(d, rng::key2(perm_seed, r));
    std::vector<char> member(d, 0);
    for (auto i : support) member[i] = 1;
    std::vector<std::uint32_t> thinned;
    thinned.reserve(support.size());
    for (auto i : support) {
      if (member[perm[i]]) thinned.push_back(i);
    }
    support = std::move(thinned);
  }
  return Hypervector::sparse(d, std::move(support));
}

}  // namespace hdc
