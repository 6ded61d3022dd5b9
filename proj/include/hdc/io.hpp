#pragma once

// Container file format shared by codebooks, encoded sets, models, and
// encoder parameters: a self-describing text header followed by a raw
// little-endian payload.
//
//   hdc-container 1
//   type codebook
//   kind bipolar
//   m 100
//   d 2441
//   ...
//   payload bipolar-packed 30525
//   <raw bytes>
//
// Payload encodings: bipolar rows packed 1 bit per coordinate (LSB-first
// within each byte, rows padded to whole bytes), Gaussian/real rows as
// 64-bit floats, integer rows as 32-bit ints, sparse rows as a u32 count
// followed by that many u32 indices. Multi-byte values are little-endian.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hdc/codebook.hpp"
#include "hdc/euclid.hpp"
#include "hdc/learn.hpp"
#include "hdc/setmem.hpp"

namespace hdc::io {

static_assert(std::endian::native == std::endian::little,
              "container payloads are little-endian; byte-swapping writer not implemented");

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Header {
  std::map<std::string, std::string> fields;
  std::string payload_kind;
  std::uint64_t payload_bytes = 0;

  const std::string& get(const std::string& key) const {
    auto it = fields.find(key);
    if (it == fields.end()) throw std::runtime_error("container: missing header field " + key);
    return it->second;
  }
  std::uint64_t get_u64(const std::string& key) const { return std::stoull(get(key)); }
  double get_double(const std::string& key) const { return std::stod(get(key)); }
};

inline void write_header(std::ostream& os, const std::string& type,
                         const std::vector<std::pair<std::string, std::string>>& fields,
                         const std::string& payload_kind, std::uint64_t payload_bytes) {
  os << "hdc-container 1\n" << "type " << type << "\n";
  for (const auto& [k, v] : fields) os << k << " " << v << "\n";
  os << "payload " << payload_kind << " " << payload_bytes << "\n";
}

inline Header read_header(std::istream& is) {
  Header h;
  std::string line;
  if (!std::getline(is, line) || line != "hdc-container 1") {
    throw std::runtime_error("container: bad magic line");
  }
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "payload") {
      ls >> h.payload_kind >> h.payload_bytes;
      return h;
    }
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
    h.fields[key] = rest;
  }
  throw std::runtime_error("container: truncated header (no payload line)");
}

template <typename T>
void write_raw(std::ostream& os, const T* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
}

template <typename T>
void read_raw(std::istream& is, T* data, std::size_t count) {
  is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
  if (!is) throw std::runtime_error("container: truncated payload");
}

inline void write_bipolar_row(std::ostream& os, std::span<const std::int8_t> row) {
  std::vector<std::uint8_t> bytes((row.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row[i] > 0) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  write_raw(os, bytes.data(), bytes.size());
}

inline std::vector<std::int8_t> read_bipolar_row(std::istream& is, std::uint32_t d) {
  std::vector<std::uint8_t> bytes((d + 7) / 8);
  read_raw(is, bytes.data(), bytes.size());
  std::vector<std::int8_t> row(d);
  for (std::uint32_t i = 0; i < d; ++i) {
    row[i] = (bytes[i / 8] >> (i % 8)) & 1 ? std::int8_t{1} : std::int8_t{-1};
  }
  return row;
}

inline void write_hypervector_payload(std::ostream& os, const Hypervector& v) {
  switch (v.storage()) {
    case Storage::DenseBipolar: write_bipolar_row(os, v.as_bipolar()); break;
    case Storage::DenseInteger: write_raw(os, v.as_integer().data(), v.dim()); break;
    case Storage::DenseReal: write_raw(os, v.as_real().data(), v.dim()); break;
    case Storage::SparseBinary: {
      const auto idx = v.as_sparse();
      const auto count = static_cast<std::uint32_t>(idx.size());
      write_raw(os, &count, 1);
      write_raw(os, idx.data(), idx.size());
      break;
    }
  }
}

inline const char* payload_kind_for(Storage s) {
  switch (s) {
    case Storage::DenseBipolar: return "bipolar-packed";
    case Storage::DenseInteger: return "i32";
    case Storage::DenseReal: return "f64";
    case Storage::SparseBinary: return "sparse-u32";
  }
  return "?";
}

inline std::uint64_t payload_bytes_for(const Hypervector& v) {
  switch (v.storage()) {
    case Storage::DenseBipolar: return (v.dim() + 7) / 8;
    case Storage::DenseInteger: return 4ull * v.dim();
    case Storage::DenseReal: return 8ull * v.dim();
    case Storage::SparseBinary: return 4ull + 4ull * v.as_sparse().size();
  }
  return 0;
}

inline Hypervector read_hypervector_payload(std::istream& is, const std::string& kind,
                                            std::uint32_t d, std::int64_t bound) {
  if (kind == "bipolar-packed") return Hypervector::bipolar(read_bipolar_row(is, d));
  if (kind == "i32") {
    std::vector<std::int32_t> v(d);
    read_raw(is, v.data(), d);
    return Hypervector::integer(std::move(v), bound);
  }
  if (kind == "f64") {
    std::vector<double> v(d);
    read_raw(is, v.data(), d);
    return Hypervector::real(std::move(v));
  }
  if (kind == "sparse-u32") {
    std::uint32_t count = 0;
    read_raw(is, &count, 1);
    std::vector<std::uint32_t> idx(count);
    read_raw(is, idx.data(), count);
    return Hypervector::sparse(d, std::move(idx));
  }
  throw std::runtime_error("container: unknown payload kind " + kind);
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  return os;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);
  return is;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::uint64_t parse_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Codebooks.

inline void save_codebook(const Codebook& cb, const std::string& path, bool with_mu = true) {
  auto os = detail::open_out(path);
  const auto& p = cb.params();
  std::uint64_t bytes = 0;
  for (const auto& v : cb.vectors()) bytes += detail::payload_bytes_for(v);
  const double mu = (with_mu && p.m >= 2) ? cb.incoherence()
                                          : std::numeric_limits<double>::quiet_NaN();
  detail::write_header(
      os, "codebook",
      {{"kind", codebook_kind_name(p.kind)},
       {"m", std::to_string(p.m)},
       {"d", std::to_string(p.d)},
       {"seed", std::to_string(p.seed)},
       {"sigma", detail::format_double(p.sigma)},
       {"density", detail::format_double(p.density)},
       {"fixed-weight", p.fixed_weight ? "1" : "0"},
       {"identity", detail::hex64(cb.identity())},
       {"stats", detail::format_double(cb.min_norm()) + " " +
                     detail::format_double(cb.max_norm()) + " " +
                     detail::format_double(cb.kappa()) + " " + detail::format_double(mu)}},
      detail::payload_kind_for(cb.codeword(0).storage()), bytes);
  for (const auto& v : cb.vectors()) detail::write_hypervector_payload(os, v);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline Codebook load_codebook(const std::string& path) {
  auto is = detail::open_in(path);
  const auto h = detail::read_header(is);
  if (h.get("type") != "codebook") throw std::runtime_error("container: not a codebook");
  const auto m = static_cast<std::uint32_t>(h.get_u64("m"));
  const auto d = static_cast<std::uint32_t>(h.get_u64("d"));
  const std::string kind_name = h.get("kind");
  CodebookKind kind = CodebookKind::DenseBipolar;
  if (kind_name == "gaussian") kind = CodebookKind::Gaussian;
  else if (kind_name == "sparse") kind = CodebookKind::SparseBinary;
  else if (kind_name != "bipolar") throw std::runtime_error("container: unknown codebook kind");
  std::vector<Hypervector> rows;
  rows.reserve(m);
  for (std::uint32_t a = 0; a < m; ++a) {
    rows.push_back(detail::read_hypervector_payload(is, h.payload_kind, d, 1));
  }
  Codebook cb = Codebook::from_vectors(kind, h.get_u64("seed"), std::move(rows),
                                       detail::parse_hex64(h.get("identity")));
  return cb;
}

// ---------------------------------------------------------------------------
// Encoded sets.

inline void save_encoded_set(const EncodedSet& es, const std::string& path) {
  auto os = detail::open_out(path);
  const char* mode = es.bundling == Bundling::Sum
                         ? "sum"
                         : (es.bundling == Bundling::Max ? "max" : "threshold");
  detail::write_header(
      os, "encoded-set",
      {{"bundling", mode},
       {"threshold", detail::format_double(es.threshold)},
       {"s-declared", es.s_declared ? std::to_string(*es.s_declared) : "none"},
       {"codebook", detail::hex64(es.codebook_id)},
       {"dim", std::to_string(es.vector.dim())},
       {"bound", std::to_string(es.vector.bound())}},
      detail::payload_kind_for(es.vector.storage()), detail::payload_bytes_for(es.vector));
  detail::write_hypervector_payload(os, es.vector);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline EncodedSet load_encoded_set(const std::string& path) {
  auto is = detail::open_in(path);
  const auto h = detail::read_header(is);
  if (h.get("type") != "encoded-set") throw std::runtime_error("container: not an encoded set");
  EncodedSet es;
  const std::string mode = h.get("bundling");
  es.bundling = mode == "sum" ? Bundling::Sum : (mode == "max" ? Bundling::Max
                                                               : Bundling::Threshold);
  es.threshold = h.get_double("threshold");
  if (h.get("s-declared") != "none") {
    es.s_declared = static_cast<std::uint32_t>(h.get_u64("s-declared"));
  }
  es.codebook_id = detail::parse_hex64(h.get("codebook"));
  const auto d = static_cast<std::uint32_t>(h.get_u64("dim"));
  es.vector = detail::read_hypervector_payload(is, h.payload_kind, d,
                                               static_cast<std::int64_t>(h.get_u64("bound")));
  return es;
}

// ---------------------------------------------------------------------------
// Models.

inline void save_prototype_model(const PrototypeModel& m, const std::string& path) {
  auto os = detail::open_out(path);
  std::string labels, counts;
  for (std::size_t k = 0; k < m.num_classes(); ++k) {
    labels += (k ? " " : "") + std::to_string(m.label(k));
    counts += (k ? " " : "") + std::to_string(m.count(k));
  }
  detail::write_header(os, "prototype-model",
                       {{"classes", std::to_string(m.num_classes())},
                        {"dim", std::to_string(m.dim())},
                        {"integral", m.integral() ? "1" : "0"},
                        {"labels", labels},
                        {"counts", counts}},
                       "f64", 8ull * m.num_classes() * m.dim());
  for (std::size_t k = 0; k < m.num_classes(); ++k) {
    detail::write_raw(os, m.accumulator(k).data(), m.dim());
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline PrototypeModel load_prototype_model(const std::string& path) {
  auto is = detail::open_in(path);
  const auto h = detail::read_header(is);
  if (h.get("type") != "prototype-model") {
    throw std::runtime_error("container: not a prototype model");
  }
  const auto classes = h.get_u64("classes");
  const auto dim = static_cast<std::uint32_t>(h.get_u64("dim"));
  std::vector<std::int32_t> labels(classes);
  std::vector<std::int64_t> counts(classes);
  {
    std::istringstream ls(h.get("labels")), cs(h.get("counts"));
    for (auto& v : labels) ls >> v;
    for (auto& v : counts) cs >> v;
  }
  std::vector<std::vector<double>> accs(classes, std::vector<double>(dim));
  for (auto& acc : accs) detail::read_raw(is, acc.data(), dim);
  return PrototypeModel::restore(dim, h.get("integral") == "1", std::move(labels),
                                 std::move(counts), std::move(accs));
}

inline void save_winnow_model(const WinnowModel& m, const std::string& path) {
  auto os = detail::open_out(path);
  detail::write_header(os, "linear-model",
                       {{"kind", "winnow"},
                        {"dim", std::to_string(m.dim())},
                        {"threshold", detail::format_double(m.threshold())},
                        {"factor", detail::format_double(m.factor())},
                        {"mistakes", std::to_string(m.mistake_count())}},
                       "f64", 8ull * m.weights().size());
  detail::write_raw(os, m.weights().data(), m.weights().size());
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline WinnowModel load_winnow_model(const std::string& path) {
  auto is = detail::open_in(path);
  const auto h = detail::read_header(is);
  if (h.get("type") != "linear-model" || h.get("kind") != "winnow") {
    throw std::runtime_error("container: not a winnow model");
  }
  const auto dim = static_cast<std::uint32_t>(h.get_u64("dim"));
  std::vector<double> w(2 * static_cast<std::size_t>(dim));
  detail::read_raw(is, w.data(), w.size());
  return WinnowModel::restore(dim, h.get_double("threshold"), h.get_double("factor"),
                              h.get_u64("mistakes"), std::move(w));
}

// ---------------------------------------------------------------------------
// Encoder parameters (payload-free: encoders regenerate from their seeds,
// bit-identically by construction).

using AnyEncoder = std::variant<PositionIdEncoder, SrpEncoder, RffEncoder>;

inline void save_encoder(const PositionIdEncoder& enc, const std::string& path) {
  auto os = detail::open_out(path);
  detail::write_header(os, "encoder",
                       {{"variant", "position-id"},
                        {"n", std::to_string(enc.input_dim())},
                        {"bins", std::to_string(enc.bins())},
                        {"d", std::to_string(enc.d())},
                        {"seed", std::to_string(enc.seed())}},
                       "none", 0);
}

inline void save_encoder(const SrpEncoder& enc, const std::string& path) {
  auto os = detail::open_out(path);
  detail::write_header(os, "encoder",
                       {{"variant", "srp"},
                        {"n", std::to_string(enc.input_dim())},
                        {"d", std::to_string(enc.d())},
                        {"seed", std::to_string(enc.seed())}},
                       "none", 0);
}

inline void save_encoder(const RffEncoder& enc, const std::string& path) {
  auto os = detail::open_out(path);
  detail::write_header(os, "encoder",
                       {{"variant", "rff"},
                        {"n", std::to_string(enc.input_dim())},
                        {"d", std::to_string(enc.d())},
                        {"gamma", detail::format_double(enc.bandwidth())},
                        {"seed", std::to_string(enc.seed())}},
                       "none", 0);
}

inline AnyEncoder load_encoder(const std::string& path) {
  auto is = detail::open_in(path);
  const auto h = detail::read_header(is);
  if (h.get("type") != "encoder") throw std::runtime_error("container: not an encoder");
  const std::string variant = h.get("variant");
  const auto n = static_cast<std::uint32_t>(h.get_u64("n"));
  const auto d = static_cast<std::uint32_t>(h.get_u64("d"));
  const auto seed = h.get_u64("seed");
  if (variant == "position-id") {
    return PositionIdEncoder::create(n, static_cast<std::uint32_t>(h.get_u64("bins")), d, seed);
  }
  if (variant == "srp") return SrpEncoder::create(n, d, seed);
  if (variant == "rff") return RffEncoder::create(n, d, h.get_double("gamma"), seed);
  throw std::runtime_error("container: unknown encoder variant " + variant);
}

}  // namespace hdc::io
