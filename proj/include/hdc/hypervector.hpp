#pragma once

// Hypervector value type and the element-wise algebra everything else is
// built from: bundling (sum / max), binding (element-wise product with a
// bipolar key), cyclic permutation, similarity (dot / norm / Hamming), and
// the clamp / threshold maps.
//
// Storage variants:
//   DenseBipolar  - entries exactly ±1 (int8)
//   DenseInteger  - entries in [-b, +b] for a declared bound b (int32)
//   DenseReal     - double entries
//   SparseBinary  - strictly increasing non-zero indices over a universe d
//
// Hypervectors are immutable values after construction; every operation is
// a pure function returning a fresh value. Dot products are defined between
// matching storages plus the SparseBinary x DenseBipolar mix (iterates the
// sparse support); any other mix requires an explicit promotion so the
// arithmetic semantics stay unambiguous.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hdc {

enum class Storage { DenseBipolar, DenseInteger, DenseReal, SparseBinary };

inline const char* storage_name(Storage s) {
  switch (s) {
    case Storage::DenseBipolar: return "DenseBipolar";
    case Storage::DenseInteger: return "DenseInteger";
    case Storage::DenseReal: return "DenseReal";
    case Storage::SparseBinary: return "SparseBinary";
  }
  return "?";
}

class Hypervector {
 public:
  // Empty vector of dimension 0; useful as an aggregate member placeholder.
  Hypervector() = default;

  static Hypervector bipolar(std::vector<std::int8_t> v) {
    for (std::int8_t x : v) {
      if (x != 1 && x != -1) throw std::invalid_argument("bipolar entries must be +1 or -1");
    }
    Hypervector h;
    h.dim_ = static_cast<std::uint32_t>(v.size());
    h.data_ = std::move(v);
    return h;
  }

  static Hypervector integer(std::vector<std::int32_t> v, std::int64_t bound) {
    if (bound < 0) throw std::invalid_argument("integer bound must be >= 0");
    for (std::int32_t x : v) {
      if (std::abs(static_cast<std::int64_t>(x)) > bound) {
        throw std::invalid_argument("integer entry exceeds declared bound " +
                                    std::to_string(bound));
      }
    }
    Hypervector h;
    h.dim_ = static_cast<std::uint32_t>(v.size());
    h.data_ = std::move(v);
    h.bound_ = bound;
    return h;
  }

  static Hypervector real(std::vector<double> v) {
    Hypervector h;
    h.dim_ = static_cast<std::uint32_t>(v.size());
    h.data_ = std::move(v);
    return h;
  }

  static Hypervector sparse(std::uint32_t dim, std::vector<std::uint32_t> indices) {
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] >= dim) throw std::invalid_argument("sparse index out of range");
      if (i > 0 && indices[i] <= indices[i - 1]) {
        throw std::invalid_argument("sparse indices must be strictly increasing");
      }
    }
    Hypervector h;
    h.dim_ = dim;
    h.data_ = std::move(indices);
    return h;
  }

  static Hypervector zeros_integer(std::uint32_t dim) {
    return integer(std::vector<std::int32_t>(dim, 0), 0);
  }

  std::uint32_t dim() const noexcept { return dim_; }

  Storage storage() const noexcept {
    switch (data_.index()) {
      case 0: return Storage::DenseBipolar;
      case 1: return Storage::DenseInteger;
      case 2: return Storage::DenseReal;
      default: return Storage::SparseBinary;
    }
  }

  std::span<const std::int8_t> as_bipolar() const { return std::get<0>(data_); }
  std::span<const std::int32_t> as_integer() const { return std::get<1>(data_); }
  std::span<const double> as_real() const { return std::get<2>(data_); }
  std::span<const std::uint32_t> as_sparse() const { return std::get<3>(data_); }

  // Declared magnitude bound; meaningful for DenseInteger only.
  std::int64_t bound() const noexcept { return bound_; }

  bool operator==(const Hypervector& o) const {
    return dim_ == o.dim_ && data_ == o.data_;
  }

 private:
  std::uint32_t dim_ = 0;
  std::int64_t bound_ = 0;
  std::variant<std::vector<std::int8_t>, std::vector<std::int32_t>, std::vector<double>,
               std::vector<std::uint32_t>>
      data_;
};

namespace detail {

inline void require_same_dim(const Hypervector& a, const Hypervector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  }
}

[[noreturn]] inline void bad_mix(const char* op, const Hypervector& a, const Hypervector& b) {
  throw std::invalid_argument(std::string(op) + ": storage mix " + storage_name(a.storage()) +
                              " x " + storage_name(b.storage()) +
                              " requires explicit promotion");
}

inline std::int64_t dot_bipolar(std::span<const std::int8_t> a, std::span<const std::int8_t> b) {
  // matches - mismatches; the compare form vectorizes well.
  std::int64_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) matches += (a[i] == b[i]);
  return 2 * matches - static_cast<std::int64_t>(a.size());
}

inline std::int64_t dot_i8_i32(std::span<const std::int8_t> a, std::span<const std::int32_t> b) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::int64_t>(a[i]) * b[i];
  return acc;
}

inline std::int64_t dot_i32_i32(std::span<const std::int32_t> a,
                                std::span<const std::int32_t> b) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<std::int64_t>(a[i]) * b[i];
  return acc;
}

inline double dot_real(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double dot_i8_real(std::span<const std::int8_t> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * b[i];
  return acc;
}

inline std::int64_t dot_sparse_sparse(std::span<const std::uint32_t> a,
                                      std::span<const std::uint32_t> b) {
  std::int64_t acc = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++acc;
      ++i;
      ++j;
    }
  }
  return acc;
}

template <typename T>
inline double dot_sparse_dense(std::span<const std::uint32_t> idx, std::span<const T> v) {
  double acc = 0.0;
  for (std::uint32_t i : idx) acc += static_cast<double>(v[i]);
  return acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Promotions (exact; make storage mixes explicit at call sites).

inline Hypervector promote_to_integer(const Hypervector& v) {
  switch (v.storage()) {
    case Storage::DenseBipolar: {
      auto s = v.as_bipolar();
      std::vector<std::int32_t> out(s.begin(), s.end());
      return Hypervector::integer(std::move(out), 1);
    }
    case Storage::DenseInteger:
      return v;
    case Storage::SparseBinary: {
      std::vector<std::int32_t> out(v.dim(), 0);
      for (std::uint32_t i : v.as_sparse()) out[i] = 1;
      return Hypervector::integer(std::move(out), 1);
    }
    case Storage::DenseReal:
      throw std::invalid_argument("promote_to_integer: real storage is not integer-valued");
  }
  throw std::logic_error("unreachable");
}

inline Hypervector promote_to_real(const Hypervector& v) {
  switch (v.storage()) {
    case Storage::DenseBipolar: {
      auto s = v.as_bipolar();
      return Hypervector::real(std::vector<double>(s.begin(), s.end()));
    }
    case Storage::DenseInteger: {
      auto s = v.as_integer();
      return Hypervector::real(std::vector<double>(s.begin(), s.end()));
    }
    case Storage::DenseReal:
      return v;
    case Storage::SparseBinary: {
      std::vector<double> out(v.dim(), 0.0);
      for (std::uint32_t i : v.as_sparse()) out[i] = 1.0;
      return Hypervector::real(std::move(out));
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Bundling.

// Element-wise sum of dense operands. Bipolar and integer operands mix freely
// (result DenseInteger with bound = sum of operand bounds, bipolar counting 1);
// if any operand is real the result is DenseReal. Sparse operands must be
// promoted explicitly.
inline Hypervector bundle_sum(std::span<const Hypervector> vs) {
  if (vs.empty()) throw std::invalid_argument("bundle_sum: empty list (use the dim overload)");
  const std::uint32_t d = vs.front().dim();
  bool any_real = false;
  std::int64_t bound = 0;
  for (const auto& v : vs) {
    if (v.dim() != d) throw std::invalid_argument("bundle_sum: dimension mismatch");
    switch (v.storage()) {
      case Storage::DenseBipolar: bound += 1; break;
      case Storage::DenseInteger: bound += v.bound(); break;
      case Storage::DenseReal: any_real = true; break;
      case Storage::SparseBinary:
        throw std::invalid_argument(
            "bundle_sum: sparse operand requires explicit promotion to dense");
    }
  }
  if (any_real) {
    std::vector<double> acc(d, 0.0);
    for (const auto& v : vs) {
      switch (v.storage()) {
        case Storage::DenseBipolar:
          for (std::uint32_t i = 0; i < d; ++i) acc[i] += v.as_bipolar()[i];
          break;
        case Storage::DenseInteger:
          for (std::uint32_t i = 0; i < d; ++i) acc[i] += v.as_integer()[i];
          break;
        default:
          for (std::uint32_t i = 0; i < d; ++i) acc[i] += v.as_real()[i];
      }
    }
    return Hypervector::real(std::move(acc));
  }
  if (bound > std::numeric_limits<std::int32_t>::max()) {
    throw std::overflow_error("bundle_sum: accumulator bound exceeds int32 range");
  }
  std::vector<std::int32_t> acc(d, 0);
  for (const auto& v : vs) {
    if (v.storage() == Storage::DenseBipolar) {
      auto s = v.as_bipolar();
      for (std::uint32_t i = 0; i < d; ++i) acc[i] += s[i];
    } else {
      auto s = v.as_integer();
      for (std::uint32_t i = 0; i < d; ++i) acc[i] += s[i];
    }
  }
  return Hypervector::integer(std::move(acc), bound);
}

// Empty-allowed overload: an empty list yields the zero vector of dimension d.
inline Hypervector bundle_sum(std::span<const Hypervector> vs, std::uint32_t dim_if_empty) {
  if (vs.empty()) return Hypervector::zeros_integer(dim_if_empty);
  return bundle_sum(vs);
}

// Element-wise max of SparseBinary operands: the support union.
inline Hypervector bundle_max(std::span<const Hypervector> vs) {
  if (vs.empty()) throw std::invalid_argument("bundle_max: empty list (use the dim overload)");
  const std::uint32_t d = vs.front().dim();
  std::vector<std::uint32_t> acc;
  for (const auto& v : vs) {
    if (v.storage() != Storage::SparseBinary) {
      throw std::invalid_argument("bundle_max: operands must be SparseBinary");
    }
    if (v.dim() != d) throw std::invalid_argument("bundle_max: dimension mismatch");
    auto s = v.as_sparse();
    std::vector<std::uint32_t> merged;
    merged.reserve(acc.size() + s.size());
    std::set_union(acc.begin(), acc.end(), s.begin(), s.end(), std::back_inserter(merged));
    acc = std::move(merged);
  }
  return Hypervector::sparse(d, std::move(acc));
}

inline Hypervector bundle_max(std::span<const Hypervector> vs, std::uint32_t dim_if_empty) {
  if (vs.empty()) return Hypervector::sparse(dim_if_empty, {});
  return bundle_max(vs);
}

// ---------------------------------------------------------------------------
// Binding.

// Element-wise product with a bipolar key. Norm-preserving, self-inverse
// (k (x) k is the all-ones identity), distributes over bundle_sum.
inline Hypervector bind(const Hypervector& a, const Hypervector& key) {
  detail::require_same_dim(a, key);
  if (key.storage() != Storage::DenseBipolar) {
    throw std::invalid_argument("bind: key must be DenseBipolar");
  }
  auto k = key.as_bipolar();
  switch (a.storage()) {
    case Storage::DenseBipolar: {
      auto s = a.as_bipolar();
      std::vector<std::int8_t> out(s.size());
      for (std::size_t i = 0; i < s.size(); ++i)
        out[i] = static_cast<std::int8_t>(s[i] * k[i]);
      return Hypervector::bipolar(std::move(out));
    }
    case Storage::DenseInteger: {
      auto s = a.as_integer();
      std::vector<std::int32_t> out(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * k[i];
      return Hypervector::integer(std::move(out), a.bound());
    }
    case Storage::DenseReal: {
      auto s = a.as_real();
      std::vector<double> out(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * k[i];
      return Hypervector::real(std::move(out));
    }
    case Storage::SparseBinary:
      throw std::invalid_argument("bind: values must be dense storage");
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Permutation.

// Cyclic left-shift by i coordinates (negative i shifts right). Any integer
// shift is valid; it is reduced mod d.
inline Hypervector permute(const Hypervector& v, std::int64_t i) {
  const std::uint32_t d = v.dim();
  if (d == 0) return v;
  std::uint32_t s = static_cast<std::uint32_t>(((i % d) + d) % d);
  if (s == 0) return v;
  auto rotate = [&](auto span_in, auto& out) {
    const std::size_t n = span_in.size();
    for (std::size_t j = 0; j < n; ++j) out[j] = span_in[(j + s) % n];
  };
  switch (v.storage()) {
    case Storage::DenseBipolar: {
      std::vector<std::int8_t> out(d);
      rotate(v.as_bipolar(), out);
      return Hypervector::bipolar(std::move(out));
    }
    case Storage::DenseInteger: {
      std::vector<std::int32_t> out(d);
      rotate(v.as_integer(), out);
      return Hypervector::integer(std::move(out), v.bound());
    }
    case Storage::DenseReal: {
      std::vector<double> out(d);
      rotate(v.as_real(), out);
      return Hypervector::real(std::move(out));
    }
    case Storage::SparseBinary:
      throw std::invalid_argument("permute: requires dense storage");
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Similarity.

inline double dot(const Hypervector& a, const Hypervector& b) {
  detail::require_same_dim(a, b);
  const Storage sa = a.storage(), sb = b.storage();
  if (sa == sb) {
    switch (sa) {
      case Storage::DenseBipolar:
        return static_cast<double>(detail::dot_bipolar(a.as_bipolar(), b.as_bipolar()));
      case Storage::DenseInteger:
        return static_cast<double>(detail::dot_i32_i32(a.as_integer(), b.as_integer()));
      case Storage::DenseReal:
        return detail::dot_real(a.as_real(), b.as_real());
      case Storage::SparseBinary:
        return static_cast<double>(detail::dot_sparse_sparse(a.as_sparse(), b.as_sparse()));
    }
  }
  if (sa == Storage::SparseBinary && sb == Storage::DenseBipolar) {
    return detail::dot_sparse_dense(a.as_sparse(), b.as_bipolar());
  }
  if (sa == Storage::DenseBipolar && sb == Storage::SparseBinary) {
    return detail::dot_sparse_dense(b.as_sparse(), a.as_bipolar());
  }
  detail::bad_mix("dot", a, b);
}

inline double norm2_sq(const Hypervector& v) {
  switch (v.storage()) {
    case Storage::DenseBipolar:
      return static_cast<double>(v.dim());
    case Storage::DenseInteger: {
      std::int64_t acc = 0;
      for (std::int32_t x : v.as_integer()) acc += static_cast<std::int64_t>(x) * x;
      return static_cast<double>(acc);
    }
    case Storage::DenseReal: {
      double acc = 0.0;
      for (double x : v.as_real()) acc += x * x;
      return acc;
    }
    case Storage::SparseBinary:
      return static_cast<double>(v.as_sparse().size());
  }
  throw std::logic_error("unreachable");
}

inline double norm2(const Hypervector& v) { return std::sqrt(norm2_sq(v)); }

// Number of disagreeing coordinates. Defined for bipolar pairs and for
// SparseBinary pairs viewed as {0,1}^d (the support symmetric difference).
inline std::int64_t hamming(const Hypervector& a, const Hypervector& b) {
  detail::require_same_dim(a, b);
  if (a.storage() == Storage::DenseBipolar && b.storage() == Storage::DenseBipolar) {
    auto x = a.as_bipolar();
    auto y = b.as_bipolar();
    std::int64_t diff = 0;
    for (std::size_t i = 0; i < x.size(); ++i) diff += (x[i] != y[i]);
    return diff;
  }
  if (a.storage() == Storage::SparseBinary && b.storage() == Storage::SparseBinary) {
    const std::int64_t inter = detail::dot_sparse_sparse(a.as_sparse(), b.as_sparse());
    return static_cast<std::int64_t>(a.as_sparse().size()) +
           static_cast<std::int64_t>(b.as_sparse().size()) - 2 * inter;
  }
  detail::bad_mix("hamming", a, b);
}

namespace detail {

// Query dot against a member codeword without imposing the public promotion
// ceremony on every hot loop; semantics identical to dot() after promotion.
inline double query_dot(const Hypervector& codeword, const Hypervector& enc) {
  switch (codeword.storage()) {
    case Storage::DenseBipolar:
      switch (enc.storage()) {
        case Storage::DenseInteger: return static_cast<double>(dot_i8_i32(codeword.as_bipolar(), enc.as_integer()));
        case Storage::DenseReal: return dot_i8_real(codeword.as_bipolar(), enc.as_real());
        default: return dot(codeword, enc);
      }
    case Storage::SparseBinary:
      switch (enc.storage()) {
        case Storage::SparseBinary:
          return static_cast<double>(dot_sparse_sparse(codeword.as_sparse(), enc.as_sparse()));
        case Storage::DenseInteger:
          return dot_sparse_dense(codeword.as_sparse(), enc.as_integer());
        case Storage::DenseReal:
          return dot_sparse_dense(codeword.as_sparse(), enc.as_real());
        default: return dot(codeword, enc);
      }
    case Storage::DenseReal:
      if (enc.storage() == Storage::DenseReal) return dot_real(codeword.as_real(), enc.as_real());
      return dot(promote_to_real(codeword), promote_to_real(enc));
    default:
      return dot(promote_to_real(codeword), promote_to_real(enc));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Range control.

// Coordinate-wise truncation to [-c, c].
inline Hypervector clamp(const Hypervector& v, std::int64_t c) {
  if (c <= 0) throw std::invalid_argument("clamp: bound must be positive");
  switch (v.storage()) {
    case Storage::DenseBipolar:
      return v;  // entries already within any positive bound
    case Storage::DenseInteger: {
      auto s = v.as_integer();
      std::vector<std::int32_t> out(s.begin(), s.end());
      const auto lo = static_cast<std::int32_t>(std::max<std::int64_t>(
          -c, std::numeric_limits<std::int32_t>::min()));
      const auto hi = static_cast<std::int32_t>(std::min<std::int64_t>(
          c, std::numeric_limits<std::int32_t>::max()));
      for (auto& x : out) x = std::clamp(x, lo, hi);
      return Hypervector::integer(std::move(out), std::min(v.bound(), c));
    }
    case Storage::DenseReal: {
      auto s = v.as_real();
      std::vector<double> out(s.begin(), s.end());
      const double cd = static_cast<double>(c);
      for (auto& x : out) x = std::clamp(x, -cd, cd);
      return Hypervector::real(std::move(out));
    }
    case Storage::SparseBinary:
      throw std::invalid_argument("clamp: requires dense storage");
  }
  throw std::logic_error("unreachable");
}

// Threshold map g_t applied coordinate-wise: 1 if x >= t, else 0.
inline Hypervector binarize(const Hypervector& v, double t) {
  std::vector<std::uint32_t> idx;
  auto collect = [&](auto span) {
    for (std::uint32_t i = 0; i < span.size(); ++i) {
      if (static_cast<double>(span[i]) >= t) idx.push_back(i);
    }
  };
  switch (v.storage()) {
    case Storage::DenseBipolar: collect(v.as_bipolar()); break;
    case Storage::DenseInteger: collect(v.as_integer()); break;
    case Storage::DenseReal: collect(v.as_real()); break;
    case Storage::SparseBinary:
      throw std::invalid_argument("binarize: requires dense storage");
  }
  return Hypervector::sparse(v.dim(), std::move(idx));
}

// Sign-like variant of g_t: +1 if x >= t, else -1.
inline Hypervector binarize_bipolar(const Hypervector& v, double t) {
  std::vector<std::int8_t> out(v.dim());
  auto collect = [&](auto span) {
    for (std::uint32_t i = 0; i < span.size(); ++i) {
      out[i] = static_cast<double>(span[i]) >= t ? std::int8_t{1} : std::int8_t{-1};
    }
  };
  switch (v.storage()) {
    case Storage::DenseBipolar: collect(v.as_bipolar()); break;
    case Storage::DenseInteger: collect(v.as_integer()); break;
    case Storage::DenseReal: collect(v.as_real()); break;
    case Storage::SparseBinary:
      throw std::invalid_argument("binarize_bipolar: requires dense storage");
  }
  return Hypervector::bipolar(std::move(out));
}

}  // namespace hdc
