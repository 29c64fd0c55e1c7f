// SPDX-License-Identifier: Apache-2.0
//
// Snapshot CSV: header row x_1_re,x_1_im,...,x_N_re,x_N_im, then one row per
// snapshot. Values are written in shortest round-trip form, so a
// write/read cycle reproduces the matrix bit for bit.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "ucadoa/array_model.hpp"

namespace ucadoa {

/// Shortest decimal form that parses back to the same double; "nan" for NaN.
std::string format_double(double v);

void write_snapshot_csv(std::ostream& out, const SnapshotSet& snaps);

/// Throws ParseError with the 1-based line (and column, when a cell is at fault).
SnapshotSet read_snapshot_csv(std::istream& in, std::size_t expected_sensors);

}  // namespace ucadoa
