// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "ucadoa/errors.hpp"

namespace ucadoa {

double wrapped_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);  // [-pi, pi]
  if (d <= -kPi) d += kTwoPi;
  return d;
}

void ErrorAccumulator::add(const AngleEstimate& est, const SourceTruth& truth) {
  const double e_az = wrapped_difference(est.azimuth, truth.azimuth);
  const double e_el = est.elevation - truth.elevation;
  ++n_runs_;
  sum_az_ += e_az;
  sum_el_ += e_el;
  sum_sq_az_ += e_az * e_az;
  sum_sq_el_ += e_el * e_el;
}

void ErrorAccumulator::merge(const ErrorAccumulator& other) {
  n_runs_ += other.n_runs_;
  n_failures_ += other.n_failures_;
  sum_az_ += other.sum_az_;
  sum_el_ += other.sum_el_;
  sum_sq_az_ += other.sum_sq_az_;
  sum_sq_el_ += other.sum_sq_el_;
}

ErrorStats ErrorAccumulator::stats() const {
  ErrorStats s;
  s.n_runs = n_runs_;
  s.n_failures = n_failures_;
  const std::size_t ok = n_runs_ - n_failures_;
  if (ok == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.mse_azimuth = s.mse_elevation = s.bias_azimuth = s.bias_elevation = nan;
    return s;
  }
  const double inv = 1.0 / static_cast<double>(ok);
  s.mse_azimuth = sum_sq_az_ * inv;
  s.mse_elevation = sum_sq_el_ * inv;
  s.bias_azimuth = sum_az_ * inv;
  s.bias_elevation = sum_el_ * inv;
  return s;
}

ErrorStats accumulate_errors(const std::vector<std::optional<AngleEstimate>>& estimates, const SourceTruth& truth) {
  if (estimates.empty()) throw ArgumentError("no estimates to accumulate");
  ErrorAccumulator acc;
  for (const auto& e : estimates) {
    if (e) acc.add(*e, truth);
    else acc.add_failure();
  }
  return acc.stats();
}

Eigen::VectorXcd steering_vector(double azimuth, double elevation, const ArrayConfig& cfg,
                                 const std::vector<std::size_t>& sensors) {
  Eigen::VectorXcd a(static_cast<Eigen::Index>(sensors.size()));
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    a(static_cast<Eigen::Index>(k)) = std::polar(1.0, phase_at_sensor(sensors[k], azimuth, elevation, cfg));
  }
  return a;
}

Eigen::MatrixX2cd steering_jacobian(double azimuth, double elevation, const ArrayConfig& cfg,
                                    const std::vector<std::size_t>& sensors) {
  const Eigen::VectorXcd a = steering_vector(azimuth, elevation, cfg, sensors);
  Eigen::MatrixX2cd d(a.size(), 2);
  const cdouble j{0.0, 1.0};
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double off = azimuth - sensor_polar_angle(sensors[static_cast<std::size_t>(k)], cfg);
    // psi = -zeta sin(el) cos(az - theta)
    const double dpsi_daz = cfg.zeta() * std::sin(elevation) * std::sin(off);
    const double dpsi_del = -cfg.zeta() * std::cos(elevation) * std::cos(off);
    d(k, 0) = j * dpsi_daz * a(k);
    d(k, 1) = j * dpsi_del * a(k);
  }
  return d;
}

CrlbPoint crlb_point(const ArrayConfig& cfg, const SourceTruth& src, std::size_t n_snapshots, const NoiseModel& noise,
                     const std::vector<std::size_t>& subset) {
  src.validate();
  if (n_snapshots < 1) throw ArgumentError("snapshot count must be at least 1");
  if (noise.size() != cfg.n_sensors()) throw ArgumentError("noise model length does not match the sensor count");
  if (!noise.is_uniform()) throw ArgumentError("the bound is only available for uniform noise");
  const double sigma2 = noise.variances().front();
  if (!(sigma2 > 0.0)) throw DegenerateInputError("the bound vanishes for zero noise variance");

  std::vector<std::size_t> sensors = subset;
  if (sensors.empty()) {
    sensors.resize(cfg.n_sensors());
    std::iota(sensors.begin(), sensors.end(), std::size_t{1});
  }
  for (std::size_t s : sensors) {
    if (s < 1 || s > cfg.n_sensors()) throw ArgumentError("bound subset index out of range");
  }

  const Eigen::VectorXcd a = steering_vector(src.azimuth, src.elevation, cfg, sensors);
  const Eigen::MatrixX2cd d = steering_jacobian(src.azimuth, src.elevation, cfg, sensors);
  const Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(a.size(), a.size()) - a * a.adjoint() / a.squaredNorm();
  const Eigen::Matrix2d info = (d.adjoint() * proj * d).real();

  const double det = info.determinant();
  const double scale = info.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !(std::abs(det) > 1e-12 * scale * scale)) {
    throw DegenerateInputError("singular information matrix for this geometry");
  }
  const Eigen::Matrix2d bound = sigma2 / (2.0 * static_cast<double>(n_snapshots) * src.power) * info.inverse();
  return {10.0 * std::log10(src.power), bound(0, 0), bound(1, 1)};
}

std::vector<CrlbPoint> crlb_curve(const ArrayConfig& cfg, const SourceTruth& src, std::size_t n_snapshots,
                                  const NoiseModel& noise, const std::vector<double>& power_db_grid,
                                  const std::vector<std::size_t>& subset) {
  std::vector<CrlbPoint> out;
  out.reserve(power_db_grid.size());
  for (double db : power_db_grid) {
    SourceTruth s = src;
    s.power = db_to_linear(db);
    CrlbPoint p = crlb_point(cfg, s, n_snapshots, noise, subset);
    p.power_db = db;
    out.push_back(p);
  }
  return out;
}

double grid_offset_squared(double azimuth, const ArrayConfig& cfg) {
  double best = std::numeric_limits<double>::infinity();
  for (double g : quantized_azimuth_grid(cfg)) {
    const double d = wrapped_difference(azimuth, g);
    best = std::min(best, d * d);
  }
  return best;
}

}  // namespace ucadoa
