// SPDX-License-Identifier: Apache-2.0
//
// Angle-quantization estimator. The azimuth is restricted to the N-point
// grid {theta_i + pi/2, theta_i + 3 pi/2}: the antipodal pair (i, i + N/2)
// whose covariance is closest to real selects the grid point, and the sign
// of a second antipodal covariance, a quarter turn away, picks the branch.
// The elevation follows from the argument of that second covariance.
#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ucadoa/array_model.hpp"

namespace ucadoa {

enum class EstimateMethod { Quantized, ML };

enum class AzimuthBranch { PlusHalfPi, PlusThreeHalvesPi, MinusHalfPi };

/// Why the ML refiner stopped.
enum class HaltReason {
  None,                 // not an ML estimate
  GradientTolerance,    // ||grad|| <= epsilon
  ZeroElevationGradient,
  MaxIterations,
  LineSearchExhausted,
};

std::string_view to_string(EstimateMethod m);
std::string_view to_string(AzimuthBranch b);
std::string_view to_string(HaltReason h);

struct EstimateDiagnostics {
  std::size_t i_star = 0;          // selected antipodal pair, 1-based
  double min_abs_imag = 0.0;       // |Im r(i*)|
  AzimuthBranch branch = AzimuthBranch::PlusHalfPi;
  bool clamped = false;            // arcsine operand left [-1, 1]
  std::size_t covariance_evaluations = 0;
  std::size_t iterations = 0;      // ML outer iterations
  HaltReason halt = HaltReason::None;
  bool nudged = false;             // ML start elevation moved off the boundary
};

struct AngleEstimate {
  double azimuth = 0.0;    // [0, 2 pi)
  double elevation = 0.0;  // [0, pi/2]
  EstimateMethod method = EstimateMethod::Quantized;
  std::optional<EstimateDiagnostics> diagnostics;
};

struct PairScan {
  std::size_t i_star = 0;
  /// r(i) = r_hat(i, i + N/2) for i = 1..N/2, stored at index i - 1.
  std::vector<cdouble> pair_covariances;
};

struct AzimuthResolution {
  double azimuth = 0.0;
  AzimuthBranch branch = AzimuthBranch::PlusHalfPi;
  cdouble disambiguation_cov{};
};

struct ElevationResolution {
  double elevation = 0.0;
  bool clamped = false;
};

/// Scans the N/2 antipodal pairs; ties keep the smallest index.
PairScan antipodal_pair_scan(const SnapshotSet& snaps, const ArrayConfig& cfg);

/// Same scan over precomputed pair covariances (length N/2), e.g. exact ones.
std::size_t select_pair(const std::vector<cdouble>& pair_covariances);

/// Picks the azimuth branch from the sign of Im r(i* +/- N/4).
/// Throws DegenerateInputError if that covariance is exactly zero.
AzimuthResolution resolve_azimuth(std::size_t i_star, const std::vector<cdouble>& pair_covariances,
                                  const ArrayConfig& cfg);

/// arcsin(arg r / (+/- 2 zeta)); operand clamped to [-1, 1] and flagged.
/// Throws NumericalError on a non-finite operand.
ElevationResolution resolve_elevation(std::size_t i_star, AzimuthBranch branch,
                                      const std::vector<cdouble>& pair_covariances, const ArrayConfig& cfg);

/// Full estimator over pair covariances (no snapshots needed).
AngleEstimate estimate_from_pairs(const std::vector<cdouble>& pair_covariances, const ArrayConfig& cfg);

/// Full estimator from snapshots; computes exactly N/2 covariances.
AngleEstimate estimate_quantized(const SnapshotSet& snaps, const ArrayConfig& cfg);

/// Every azimuth the estimator can return, sorted ascending (N points, spacing 2 pi / N).
std::vector<double> quantized_azimuth_grid(const ArrayConfig& cfg);

}  // namespace ucadoa
