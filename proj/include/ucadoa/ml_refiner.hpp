// SPDX-License-Identifier: Apache-2.0
//
// Deterministic maximum-likelihood refinement on a K-sensor subset.
// Minimizes l(az, el) = -Tr{A R_hat} by gradient descent with an
// elevation-feasible initial step and Armijo backtracking.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ucadoa/array_model.hpp"
#include "ucadoa/quantized_estimator.hpp"

namespace ucadoa {

struct MLConfig {
  std::vector<std::size_t> subset;  // 1-based sensor indices
  double m_divisor = 10.0;          // M > 1
  double armijo_alpha = 0.3;        // (0, 0.5)
  double backtrack_beta = 0.5;      // (0, 1)
  double grad_tolerance = 0.03;     // epsilon > 0
  std::size_t max_outer_iters = 500;
  std::size_t max_backtracks = 60;
  /// Stop when dl/d(el) is exactly zero. Disabling it switches to a
  /// fallback initial step of 1/M rad along the gradient.
  bool halt_on_zero_elevation_gradient = true;

  /// Sensor subset {step, 2 step, ..., N}.
  static std::vector<std::size_t> strided_subset(std::size_t n_sensors, std::size_t step);

  /// Throws ArgumentError when a field is out of range for this array.
  void validate(const ArrayConfig& cfg) const;
};

struct SubsetMatrices {
  Eigen::MatrixXcd a_matrix;  // a_pq = exp(j (psi_ip - psi_iq))
  Eigen::MatrixXcd r_hat;     // r_hat(i_p, i_q), diagonal included
};

struct MLGradient {
  double d_azimuth = 0.0;
  double d_elevation = 0.0;
  double norm() const;
};

/// One accepted iterate of refine_ml (the start point is entry 0).
struct MLIterate {
  double azimuth = 0.0;  // unwrapped
  double elevation = 0.0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;      // step that produced this iterate, 0 for the start
  std::size_t backtracks = 0;
};

/// Sample covariance on the subset, K x K.
Eigen::MatrixXcd subset_covariance(const SnapshotSet& snaps, const std::vector<std::size_t>& subset);

/// Model matrix A for candidate angles, K x K.
Eigen::MatrixXcd model_matrix(double azimuth, double elevation, const ArrayConfig& cfg,
                              const std::vector<std::size_t>& subset);

SubsetMatrices build_subset_matrices(const SnapshotSet& snaps, const ArrayConfig& cfg, const MLConfig& ml,
                                     double azimuth, double elevation);

/// -Re Tr{A R_hat}.
double ml_objective(const SubsetMatrices& m);

/// Analytic gradient [dl/d(az), dl/d(el)] at the angles A was built from.
MLGradient ml_gradient(const SubsetMatrices& m, double azimuth, double elevation, const ArrayConfig& cfg,
                       const MLConfig& ml);

/// Largest admissible step keeping the elevation inside (0, pi/2).
/// nullopt when dl/d(el) == 0 (no elevation constraint applies).
std::optional<double> step_bound(double elevation, const MLGradient& g);

/// Runs the descent from `start`. Appends every accepted iterate to `trace`
/// when given. Throws NumericalError on non-finite objective or gradient.
AngleEstimate refine_ml(const SnapshotSet& snaps, const ArrayConfig& cfg, const MLConfig& ml,
                        const AngleEstimate& start, std::vector<MLIterate>* trace = nullptr);

}  // namespace ucadoa
