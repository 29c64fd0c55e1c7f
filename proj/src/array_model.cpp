// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ucadoa/errors.hpp"

namespace ucadoa {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

ArrayConfig::ArrayConfig(std::size_t n_sensors, double radius_over_wavelength)
    : n_sensors_(n_sensors), radius_over_wavelength_(radius_over_wavelength), zeta_(kTwoPi * radius_over_wavelength) {
  if (n_sensors < 8 || n_sensors % 4 != 0) {
    throw ArgumentError("sensor count must be a multiple of 4 and at least 8, got " + std::to_string(n_sensors));
  }
  if (!(radius_over_wavelength > 0.0 && radius_over_wavelength <= 0.25)) {
    throw ArgumentError("radius over wavelength must lie in (0, 1/4], got " + std::to_string(radius_over_wavelength));
  }
}

void SourceTruth::validate() const {
  if (!(azimuth >= 0.0 && azimuth < kTwoPi)) throw ArgumentError("azimuth must lie in [0, 2 pi)");
  if (!(elevation > 0.0 && elevation < kPi / 2)) throw ArgumentError("elevation must lie in (0, pi/2)");
  if (!(power > 0.0) || !std::isfinite(power)) throw ArgumentError("power must be positive and finite");
}

NoiseModel NoiseModel::uniform(std::size_t n_sensors, double variance) {
  return NoiseModel(std::vector<double>(n_sensors, variance));
}

NoiseModel::NoiseModel(std::vector<double> variances) : variances_(std::move(variances)) {
  for (double v : variances_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ArgumentError("noise variances must be finite and non-negative");
  }
}

bool NoiseModel::is_uniform() const noexcept {
  return std::adjacent_find(variances_.begin(), variances_.end(), std::not_equal_to<>{}) == variances_.end();
}

SnapshotSet::SnapshotSet(Eigen::MatrixXcd data) : data_(std::move(data)) {
  if (data_.cols() < 1) throw ArgumentError("a snapshot set needs at least one snapshot");
  if (data_.rows() < 1) throw ArgumentError("a snapshot set needs at least one sensor");
}

double sensor_polar_angle(std::size_t n, const ArrayConfig& cfg) {
  if (n < 1 || n > cfg.n_sensors()) {
    throw ArgumentError("sensor index " + std::to_string(n) + " outside [1, " + std::to_string(cfg.n_sensors()) + "]");
  }
  return kTwoPi * static_cast<double>(n - 1) / static_cast<double>(cfg.n_sensors());
}

double phase_at_sensor(std::size_t n, double azimuth, double elevation, const ArrayConfig& cfg) {
  return -cfg.zeta() * std::sin(elevation) * std::cos(azimuth - sensor_polar_angle(n, cfg));
}

double phase_at_sensor(std::size_t n, const SourceTruth& src, const ArrayConfig& cfg) {
  return phase_at_sensor(n, src.azimuth, src.elevation, cfg);
}

SnapshotSet synthesize_snapshots(const SourceTruth& src, const ArrayConfig& cfg, const NoiseModel& noise,
                                 std::size_t n_snapshots, std::uint64_t seed) {
  src.validate();
  if (n_snapshots < 1) throw ArgumentError("snapshot count must be at least 1");
  const std::size_t n = cfg.n_sensors();
  if (noise.size() != n) throw ArgumentError("noise model length does not match the sensor count");

  Eigen::VectorXcd steering(static_cast<Eigen::Index>(n));
  Eigen::VectorXd noise_scale(static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k <= n; ++k) {
    steering(static_cast<Eigen::Index>(k - 1)) = std::polar(1.0, phase_at_sensor(k, src, cfg));
    // CN(0, s^2) has independent real and imaginary parts of variance s^2 / 2.
    noise_scale(static_cast<Eigen::Index>(k - 1)) = std::sqrt(noise.variances()[k - 1] / 2.0);
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double amplitude = std::sqrt(src.power);

  Eigen::MatrixXcd data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_snapshots));
  for (Eigen::Index l = 0; l < data.cols(); ++l) {
    cdouble s{amplitude, 0.0};
    if (src.waveform == Waveform::RandomPhase) s = std::polar(amplitude, phase(rng));
    for (Eigen::Index k = 0; k < data.rows(); ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      data(k, l) = steering(k) * s + noise_scale(k) * cdouble{re, im};
    }
  }
  return SnapshotSet(std::move(data));
}

}  // namespace ucadoa
