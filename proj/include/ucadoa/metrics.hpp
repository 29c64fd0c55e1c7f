// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ucadoa/array_model.hpp"
#include "ucadoa/quantized_estimator.hpp"

namespace ucadoa {

/// Signed a - b wrapped into (-pi, pi].
double wrapped_difference(double a, double b);

struct ErrorStats {
  double mse_azimuth = 0.0;
  double mse_elevation = 0.0;
  double bias_azimuth = 0.0;
  double bias_elevation = 0.0;
  std::size_t n_runs = 0;
  std::size_t n_failures = 0;
};

/// Running sums for ErrorStats; merge() combines partial accumulators.
class ErrorAccumulator {
 public:
  void add(const AngleEstimate& est, const SourceTruth& truth);
  void add_failure() { ++n_runs_; ++n_failures_; }
  void merge(const ErrorAccumulator& other);
  /// Means over successful runs; NaN fields when every run failed.
  ErrorStats stats() const;

 private:
  std::size_t n_runs_ = 0;
  std::size_t n_failures_ = 0;
  double sum_az_ = 0.0, sum_el_ = 0.0, sum_sq_az_ = 0.0, sum_sq_el_ = 0.0;
};

/// One entry per run: nullopt marks a run whose estimator threw.
/// Throws ArgumentError on an empty list.
ErrorStats accumulate_errors(const std::vector<std::optional<AngleEstimate>>& estimates, const SourceTruth& truth);

struct CrlbPoint {
  double power_db = 0.0;
  double crlb_azimuth = 0.0;    // rad^2
  double crlb_elevation = 0.0;  // rad^2
};

/// Steering vector exp(j psi_n) over `sensors` (1-based).
Eigen::VectorXcd steering_vector(double azimuth, double elevation, const ArrayConfig& cfg,
                                 const std::vector<std::size_t>& sensors);

/// Columns d a / d az and d a / d el.
Eigen::MatrixX2cd steering_jacobian(double azimuth, double elevation, const ArrayConfig& cfg,
                                    const std::vector<std::size_t>& sensors);

/// Deterministic single-source bound with the waveform as nuisance:
/// (sigma^2 / (2 L P)) Re[D^H (I - a a^H / |a|^2) D]^-1, diagonal entries.
/// `subset` empty means the full array. Throws ArgumentError for nonuniform
/// noise, DegenerateInputError for a singular information matrix.
CrlbPoint crlb_point(const ArrayConfig& cfg, const SourceTruth& src, std::size_t n_snapshots, const NoiseModel& noise,
                     const std::vector<std::size_t>& subset = {});

/// crlb_point for each entry of a power grid in dB (src.power is ignored).
std::vector<CrlbPoint> crlb_curve(const ArrayConfig& cfg, const SourceTruth& src, std::size_t n_snapshots,
                                  const NoiseModel& noise, const std::vector<double>& power_db_grid,
                                  const std::vector<std::size_t>& subset = {});

/// Squared distance from `azimuth` to the closest point of the quantized grid.
double grid_offset_squared(double azimuth, const ArrayConfig& cfg);

}  // namespace ucadoa
