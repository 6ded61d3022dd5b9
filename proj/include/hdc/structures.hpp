#pragma once

// Feature-value records bound with bipolar keys, shift-encoded sequences,
// and the streaming window whose state stays bit-identical to a full
// re-encode of its contents.

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hdc/codebook.hpp"
#include "hdc/hypervector.hpp"

namespace hdc {

// Paired value codebook phi (any kind) and bipolar feature codebook psi of
// the same dimension. Feature keys are their own binding inverses.
struct StructureCodec {
  Codebook value_cb;
  Codebook feature_cb;

  StructureCodec(Codebook values, Codebook features)
      : value_cb(std::move(values)), feature_cb(std::move(features)) {
    if (feature_cb.kind() != CodebookKind::DenseBipolar) {
      throw std::invalid_argument("structure codec: feature codebook must be DenseBipolar");
    }
    if (value_cb.d() != feature_cb.d()) {
      throw std::invalid_argument("structure codec: codebook dimensions differ");
    }
  }

  std::uint32_t d() const noexcept { return value_cb.d(); }
  std::uint32_t num_values() const noexcept { return value_cb.m(); }
  std::uint32_t num_features() const noexcept { return feature_cb.m(); }
};

// phi(x) = sum_i psi(f_i) (x) phi(x_i). Pairs are sorted by feature index
// before summation so the encoding is bit-identical under input permutation.
// A record may carry any subset of features; feature indices must be distinct.
inline Hypervector encode_structure(
    std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs,
    const StructureCodec& codec) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted(pairs.begin(), pairs.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Hypervector> bound;
  bound.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto [f, a] = sorted[i];
    if (f >= codec.num_features()) throw std::out_of_range("encode_structure: feature index");
    if (a >= codec.num_values()) throw std::out_of_range("encode_structure: value index");
    if (i > 0 && f == sorted[i - 1].first) {
      throw std::invalid_argument("encode_structure: repeated feature");
    }
    const auto& value = codec.value_cb.codeword(a);
    bound.push_back(bind(value.storage() == Storage::SparseBinary ? promote_to_integer(value)
                                                                  : value,
                         codec.feature_cb.codeword(f)));
  }
  return bundle_sum(bound, codec.d());
}

struct ScoredSymbol {
  std::uint32_t symbol = 0;
  double score = 0.0;
};

// Unbatched decode rule: unbind with psi(f) (its own inverse) and return the
// argmax symbol. Ties break toward the lowest symbol index. The raw score is
// exposed so callers can apply their own rejection margin; correctness is
// guaranteed whenever the measured decode incoherence is below 1/(2n).
inline ScoredSymbol decode_feature_scored(const Hypervector& h, std::uint32_t f,
                                          const StructureCodec& codec) {
  if (f >= codec.num_features()) throw std::out_of_range("decode_feature: feature index");
  const Hypervector unbound = bind(h, codec.feature_cb.codeword(f));
  ScoredSymbol best;
  bool first = true;
  for (std::uint32_t a = 0; a < codec.num_values(); ++a) {
    const auto& cw = codec.value_cb.codeword(a);
    const double score = detail::query_dot(cw, unbound);
    if (first || score > best.score) {
      best = {a, score};
      first = false;
    }
  }
  return best;
}

inline std::uint32_t decode_feature(const Hypervector& h, std::uint32_t f,
                                    const StructureCodec& codec) {
  return decode_feature_scored(h, f, codec).symbol;
}

// <h1,h2> / L^2: estimates the number of features the two records agree on,
// within n^2 mu_emp of the truth (deterministically, given the measured
// binding incoherence).
inline double structure_overlap(const Hypervector& h1, const Hypervector& h2,
                                const StructureCodec& codec) {
  if (h1.dim() != codec.d() || h2.dim() != codec.d()) {
    throw std::invalid_argument("structure_overlap: dimension mismatch with codec");
  }
  const double l2 = codec.value_cb.min_norm_sq();
  if (h1.storage() == h2.storage()) return dot(h1, h2) / l2;
  return dot(promote_to_real(h1), promote_to_real(h2)) / l2;
}

// Measured binding incoherence: max over values a, a' and features f != f'
// of |<phi(a) (x) psi(f), phi(a') (x) psi(f')>| / L^2. Numerically identical
// to the unbinding form <phi(a), (phi(a') (x) psi(f)) (x) psi^-1(f')>.
// Exhaustive over all tuples; intended for desk-scale codebooks.
inline double binding_incoherence(const StructureCodec& codec) {
  const std::uint32_t m = codec.num_values();
  const std::uint32_t n = codec.num_features();
  if (n < 2) throw std::invalid_argument("binding_incoherence: needs >= 2 features");
  double max_abs = 0.0;
  for (std::uint32_t f = 0; f + 1 < n; ++f) {
    for (std::uint32_t f2 = f + 1; f2 < n; ++f2) {
      const Hypervector key =
          bind(codec.feature_cb.codeword(f), codec.feature_cb.codeword(f2));
      for (std::uint32_t a = 0; a < m; ++a) {
        const auto& va = codec.value_cb.codeword(a);
        const Hypervector wa =
            bind(va.storage() == Storage::SparseBinary ? promote_to_integer(va) : va, key);
        for (std::uint32_t a2 = a; a2 < m; ++a2) {
          const double v = detail::query_dot(codec.value_cb.codeword(a2), wa);
          max_abs = std::max(max_abs, std::abs(v));
        }
      }
    }
  }
  return max_abs / codec.value_cb.min_norm_sq();
}

// Sufficiency quantity for field decoding: crosstalk terms are bounded by the
// binding incoherence, the same-feature wrong-symbol term by the value
// incoherence. decode_feature is exact whenever this is below 1/(2n).
inline double decode_incoherence(const StructureCodec& codec) {
  return std::max(codec.value_cb.incoherence(), binding_incoherence(codec));
}

// ---------------------------------------------------------------------------
// Sequences: phi(x) = sum_i rho^(n-i)(phi(x_i)), newest symbol unshifted.

namespace detail {
inline void require_sequence_cb(const Codebook& cb, std::size_t n) {
  if (cb.kind() != CodebookKind::DenseBipolar) {
    throw std::invalid_argument("sequences: value codebook must be DenseBipolar");
  }
  if (n >= cb.d()) throw std::invalid_argument("sequences: need n < d");
}
}  // namespace detail

inline Hypervector encode_sequence(std::span<const std::uint32_t> xs, const Codebook& value_cb) {
  detail::require_sequence_cb(value_cb, xs.size());
  const std::uint32_t d = value_cb.d();
  std::vector<std::int32_t> acc(d, 0);
  for (std::uint32_t x : xs) {
    if (x >= value_cb.m()) throw std::out_of_range("encode_sequence: symbol index");
    // acc <- rho^1(acc) + phi(x)
    std::rotate(acc.begin(), acc.begin() + 1, acc.end());
    auto cw = value_cb.codeword(x).as_bipolar();
    for (std::uint32_t i = 0; i < d; ++i) acc[i] += cw[i];
  }
  return Hypervector::integer(std::move(acc), static_cast<std::int64_t>(xs.size()));
}

// Streaming window over the n most recent symbols. Until n symbols have
// arrived the state is the shift-encoding of the partial sequence,
// right-aligned at the newest position; from then on each push evicts the
// oldest symbol. The state is bit-identical to encode_sequence of the
// current contents at every step. Single-writer; copy freely for
// persistent-value use.
class SequenceWindow {
 public:
  SequenceWindow(Codebook value_cb, std::uint32_t n)
      : cb_(std::move(value_cb)), n_(n), state_(cb_.d(), 0) {
    if (n < 1) throw std::invalid_argument("sequence window: n >= 1");
    detail::require_sequence_cb(cb_, n);
  }

  std::uint32_t window_length() const noexcept { return n_; }
  std::uint32_t filled() const noexcept { return static_cast<std::uint32_t>(history_.size()); }
  const std::deque<std::uint32_t>& history() const noexcept { return history_; }
  const Codebook& value_codebook() const noexcept { return cb_; }

  Hypervector state() const {
    return Hypervector::integer(std::vector<std::int32_t>(state_.begin(), state_.end()),
                                static_cast<std::int64_t>(history_.size()));
  }

  SequenceWindow& push(std::uint32_t x) {
    if (x >= cb_.m()) throw std::out_of_range("sequence window: symbol index");
    const std::uint32_t d = cb_.d();
    if (history_.size() == n_) {
      // state <- rho^1(state - rho^(n-1)(phi(oldest))) + phi(x)
      const std::uint32_t oldest = history_.front();
      history_.pop_front();
      auto old_cw = cb_.codeword(oldest).as_bipolar();
      const std::uint32_t shift = n_ - 1;
      for (std::uint32_t i = 0; i < d; ++i) {
        // coordinate i of rho^(n-1)(phi(oldest)) is phi(oldest)[(i + n - 1) mod d]
        state_[i] -= old_cw[(i + shift) % d];
      }
    }
    std::rotate(state_.begin(), state_.begin() + 1, state_.end());
    auto cw = cb_.codeword(x).as_bipolar();
    for (std::uint32_t i = 0; i < d; ++i) state_[i] += cw[i];
    history_.push_back(x);
    return *this;
  }

 private:
  Codebook cb_;
  std::uint32_t n_;
  std::vector<std::int32_t> state_;
  std::deque<std::uint32_t> history_;
};

inline SequenceWindow window_new(Codebook value_cb, std::uint32_t n) {
  return SequenceWindow(std::move(value_cb), n);
}

inline SequenceWindow window_push(SequenceWindow w, std::uint32_t x) {
  w.push(x);
  return w;
}

// Recover the symbol at 0-based position pos (0 = oldest) of a shift-encoded
// window of length n: argmax_a <phi(a), rho^-(n-1-pos)(h)>.
inline std::uint32_t decode_sequence_position(const Hypervector& h, std::uint32_t pos,
                                              std::uint32_t n, const Codebook& value_cb) {
  detail::require_sequence_cb(value_cb, n);
  if (pos >= n) throw std::out_of_range("decode_sequence_position: position out of window");
  const Hypervector aligned = permute(h, -static_cast<std::int64_t>(n - 1 - pos));
  std::uint32_t best = 0;
  double best_score = 0.0;
  bool first = true;
  for (std::uint32_t a = 0; a < value_cb.m(); ++a) {
    const double score = detail::query_dot(value_cb.codeword(a), aligned);
    if (first || score > best_score) {
      best = a;
      best_score = score;
      first = false;
    }
  }
  return best;
}

// Shift incoherence: max over symbols a, a' and shifts i in [1, max_shift]
// of |<phi(a), rho^(i)(phi(a'))>| / d. Pass max_shift = d-1 for the
// exhaustive scan.
inline double shift_incoherence(const Codebook& cb, std::uint32_t max_shift) {
  if (cb.kind() != CodebookKind::DenseBipolar) {
    throw std::invalid_argument("shift_incoherence: bipolar codebooks only");
  }
  const std::uint32_t d = cb.d();
  if (max_shift >= d) max_shift = d - 1;
  double max_abs = 0.0;
  for (std::uint32_t a2 = 0; a2 < cb.m(); ++a2) {
    std::vector<std::int8_t> rotated(cb.codeword(a2).as_bipolar().begin(),
                                     cb.codeword(a2).as_bipolar().end());
    for (std::uint32_t i = 1; i <= max_shift; ++i) {
      std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
      for (std::uint32_t a = 0; a < cb.m(); ++a) {
        const auto v = detail::dot_bipolar(cb.codeword(a).as_bipolar(), rotated);
        max_abs = std::max(max_abs, static_cast<double>(std::abs(v)));
      }
    }
  }
  return max_abs / static_cast<double>(d);
}

}  // namespace hdc
