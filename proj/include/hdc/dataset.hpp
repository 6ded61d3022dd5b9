#pragma once

// CSV ingestion for the experiment CLI: rectangular numeric tables with an
// optional header row, an optional label column (categorical, coded by first
// appearance), and min-max normalization onto [0,1] (what position-ID wants).

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdc {

enum class Normalization { None, MinMax };

struct Dataset {
  std::vector<std::vector<double>> rows;   // feature rows
  std::vector<std::int32_t> labels;        // class index per row (empty if no label column)
  std::vector<double> label_values;        // distinct raw label values, appearance order
  std::size_t n_features = 0;

  std::size_t size() const noexcept { return rows.size(); }
};

namespace detail {

inline bool parse_cell(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(cell, &pos);
  } catch (...) {
    return false;
  }
  while (pos < cell.size() && (cell[pos] == ' ' || cell[pos] == '\t' || cell[pos] == '\r')) ++pos;
  return pos == cell.size();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

inline Dataset ingest_csv(const std::string& path, std::optional<std::size_t> label_col,
                          Normalization normalization) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("ingest_csv: cannot open " + path);

  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool checked_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (!checked_header) {
      checked_header = true;
      width = cells.size();
      bool numeric = true;
      double v;
      for (const auto& c : cells) numeric = numeric && detail::parse_cell(c, v);
      if (!numeric) continue;  // header row: skip it
    }
    if (cells.size() != width) {
      throw std::runtime_error("ingest_csv: ragged row at line " + std::to_string(lineno));
    }
    std::vector<double> parsed(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_cell(cells[c], parsed[c])) {
        throw std::runtime_error("ingest_csv: non-numeric cell at line " +
                                 std::to_string(lineno) + ", column " + std::to_string(c));
      }
    }
    if (label_col) {
      if (*label_col >= parsed.size()) {
        throw std::runtime_error("ingest_csv: label column out of range");
      }
      const double raw = parsed[*label_col];
      std::int32_t code = -1;
      for (std::size_t i = 0; i < ds.label_values.size(); ++i) {
        if (ds.label_values[i] == raw) {
          code = static_cast<std::int32_t>(i);
          break;
        }
      }
      if (code < 0) {
        code = static_cast<std::int32_t>(ds.label_values.size());
        ds.label_values.push_back(raw);
      }
      ds.labels.push_back(code);
      parsed.erase(parsed.begin() + static_cast<std::ptrdiff_t>(*label_col));
    }
    ds.rows.push_back(std::move(parsed));
  }
  if (ds.rows.empty()) throw std::runtime_error("ingest_csv: empty file " + path);
  ds.n_features = ds.rows.front().size();

  if (normalization == Normalization::MinMax) {
    for (std::size_t c = 0; c < ds.n_features; ++c) {
      double lo = ds.rows[0][c], hi = ds.rows[0][c];
      for (const auto& r : ds.rows) {
        lo = std::min(lo, r[c]);
        hi = std::max(hi, r[c]);
      }
      const double range = hi - lo;
      for (auto& r : ds.rows) {
        // constant columns map to 0
        r[c] = range > 0 ? (r[c] - lo) / range : 0.0;
      }
    }
  }
  return ds;
}

}  // namespace hdc
