// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "ucadoa/array_model.hpp"

namespace ucadoa {

struct PairCovariance {
  std::size_t i = 0;
  std::size_t j = 0;
  cdouble value{};
};

/// Noiseless cross-covariance P exp(j (psi_i - psi_j)). Throws ArgumentError when i == j,
/// where noise power would enter and the identity no longer holds.
cdouble exact_covariance(std::size_t i, std::size_t j, const SourceTruth& src, const ArrayConfig& cfg);

/// (1/L) sum_l x_i(l) conj(x_j(l)). Throws ArgumentError when i == j or an index is out of range.
PairCovariance sample_covariance(std::size_t i, std::size_t j, const SnapshotSet& snaps);

/// Argument of r in (-pi, pi], built from arctan(Im/Re) with explicit quadrant cases.
/// The negative real axis maps to pi. Throws DegenerateInputError for r == 0.
double principal_argument(cdouble r);

}  // namespace ucadoa
