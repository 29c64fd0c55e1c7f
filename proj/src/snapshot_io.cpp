// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/snapshot_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

#include "ucadoa/errors.hpp"

namespace ucadoa {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

std::string header_name(std::size_t column) {
  return "x_" + std::to_string(column / 2 + 1) + (column % 2 ? "_im" : "_re");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void write_snapshot_csv(std::ostream& out, const SnapshotSet& snaps) {
  const auto& d = snaps.data();
  for (Eigen::Index c = 0; c < 2 * d.rows(); ++c) {
    if (c) out << ',';
    out << header_name(static_cast<std::size_t>(c));
  }
  out << '\n';
  for (Eigen::Index l = 0; l < d.cols(); ++l) {
    for (Eigen::Index n = 0; n < d.rows(); ++n) {
      if (n) out << ',';
      out << format_double(d(n, l).real()) << ',' << format_double(d(n, l).imag());
    }
    out << '\n';
  }
}

SnapshotSet read_snapshot_csv(std::istream& in, std::size_t expected_sensors) {
  const std::size_t n_cols = 2 * expected_sensors;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, 0, "missing header row");
  {
    const auto cells = split_commas(strip_cr(line));
    if (cells.size() != n_cols) {
      throw ParseError(1, 0, "header has " + std::to_string(cells.size()) + " columns, expected " +
                                 std::to_string(n_cols));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (cells[c] != header_name(c)) {
        throw ParseError(1, c + 1, "expected header '" + header_name(c) + "', found '" + std::string(cells[c]) + "'");
      }
    }
  }

  std::vector<double> values;
  std::size_t line_no = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = strip_cr(line);
    if (body.empty()) continue;
    const auto cells = split_commas(body);
    if (cells.size() != n_cols) {
      throw ParseError(line_no, 0,
                       "found " + std::to_string(cells.size()) + " columns, expected " + std::to_string(n_cols));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      double v = 0.0;
      const auto cell = cells[c];
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError(line_no, c + 1, "column " + header_name(c) + ": not a finite number: '" + std::string(cell) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no, 0, "no snapshot rows");

  Eigen::MatrixXcd data(static_cast<Eigen::Index>(expected_sensors), static_cast<Eigen::Index>(rows));
  for (std::size_t l = 0; l < rows; ++l) {
    for (std::size_t n = 0; n < expected_sensors; ++n) {
      const std::size_t base = l * n_cols + 2 * n;
      data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l)) = {values[base], values[base + 1]};
    }
  }
  return SnapshotSet(std::move(data));
}

}  // namespace ucadoa
