// SPDX-License-Identifier: Apache-2.0
//
// Uniform circular array geometry and the narrow-band single-source
// snapshot model x_n(l) = exp(j psi_n) s(l) + w_n(l).
//
// Sensors are 1-indexed throughout the public interface: sensor n sits at
// polar angle theta_n = 2 pi (n - 1) / N.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace ucadoa {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Linear power from a dB value (reference power 1).
double db_to_linear(double db);

class ArrayConfig {
 public:
  /// Throws ArgumentError unless N is a multiple of 4, N >= 8 and 0 < R/lambda <= 1/4.
  ArrayConfig(std::size_t n_sensors, double radius_over_wavelength);

  std::size_t n_sensors() const noexcept { return n_sensors_; }
  double radius_over_wavelength() const noexcept { return radius_over_wavelength_; }
  /// Electrical radius 2 pi R / lambda.
  double zeta() const noexcept { return zeta_; }

 private:
  std::size_t n_sensors_;
  double radius_over_wavelength_;
  double zeta_;
};

enum class Waveform { ConstantAmplitude, RandomPhase };

struct SourceTruth {
  double azimuth = 0.0;    // [0, 2 pi)
  double elevation = 0.0;  // (0, pi/2)
  double power = 1.0;      // linear, > 0
  Waveform waveform = Waveform::ConstantAmplitude;

  /// Throws ArgumentError if any field is outside its domain.
  void validate() const;
};

/// Per-sensor noise variances sigma_n^2.
class NoiseModel {
 public:
  static NoiseModel uniform(std::size_t n_sensors, double variance);
  /// Throws ArgumentError on negative or non-finite entries.
  explicit NoiseModel(std::vector<double> variances);

  const std::vector<double>& variances() const noexcept { return variances_; }
  std::size_t size() const noexcept { return variances_.size(); }
  bool is_uniform() const noexcept;

 private:
  std::vector<double> variances_;
};

/// N x L complex observations, rows are sensors, columns are snapshots.
/// Immutable after construction.
class SnapshotSet {
 public:
  explicit SnapshotSet(Eigen::MatrixXcd data);

  const Eigen::MatrixXcd& data() const noexcept { return data_; }
  std::size_t n_sensors() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t n_snapshots() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  /// 1-based sensor row as a view.
  auto row(std::size_t n) const { return data_.row(static_cast<Eigen::Index>(n - 1)); }

 private:
  Eigen::MatrixXcd data_;
};

/// theta_n = 2 pi (n - 1) / N. Throws ArgumentError unless 1 <= n <= N.
double sensor_polar_angle(std::size_t n, const ArrayConfig& cfg);

/// psi_n = -zeta sin(elevation) cos(azimuth - theta_n), for explicit angles.
double phase_at_sensor(std::size_t n, double azimuth, double elevation, const ArrayConfig& cfg);
double phase_at_sensor(std::size_t n, const SourceTruth& src, const ArrayConfig& cfg);

/// Draws L independent snapshots. Identical arguments give bit-identical output.
SnapshotSet synthesize_snapshots(const SourceTruth& src, const ArrayConfig& cfg, const NoiseModel& noise,
                                 std::size_t n_snapshots, std::uint64_t seed);

}  // namespace ucadoa
