// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/ml_refiner.hpp"

#include <cassert>
#include <cmath>
#include <set>
#include <string>

#include "ucadoa/covariance.hpp"
#include "ucadoa/errors.hpp"

namespace ucadoa {

namespace {

constexpr double kBoundaryNudge = 1e-6;

Eigen::Index at(std::size_t k) { return static_cast<Eigen::Index>(k); }

void check_subset(const std::vector<std::size_t>& subset, std::size_t n_sensors) {
  if (subset.empty()) throw ArgumentError("ml.subset must not be empty");
  std::set<std::size_t> seen;
  for (std::size_t s : subset) {
    if (s < 1 || s > n_sensors) throw ArgumentError("ml.subset index " + std::to_string(s) + " out of range");
    if (!seen.insert(s).second) throw ArgumentError("ml.subset index " + std::to_string(s) + " repeated");
  }
}

double objective_at(const Eigen::MatrixXcd& r_hat, double azimuth, double elevation, const ArrayConfig& cfg,
                    const std::vector<std::size_t>& subset) {
  return ml_objective({model_matrix(azimuth, elevation, cfg, subset), r_hat});
}

void require_finite(double v, const char* what, std::size_t iteration) {
  if (!std::isfinite(v)) {
    throw NumericalError(std::string("non-finite ") + what + " at ML iteration " + std::to_string(iteration));
  }
}

}  // namespace

std::vector<std::size_t> MLConfig::strided_subset(std::size_t n_sensors, std::size_t step) {
  if (step == 0) throw ArgumentError("subset stride must be positive");
  std::vector<std::size_t> out;
  for (std::size_t s = step; s <= n_sensors; s += step) out.push_back(s);
  return out;
}

void MLConfig::validate(const ArrayConfig& cfg) const {
  check_subset(subset, cfg.n_sensors());
  if (subset.size() < 2) throw ArgumentError("ml.subset needs at least 2 sensors");
  if (!(m_divisor > 1.0)) throw ArgumentError("ml.m_divisor must exceed 1");
  if (!(armijo_alpha > 0.0 && armijo_alpha < 0.5)) throw ArgumentError("ml.alpha must lie in (0, 0.5)");
  if (!(backtrack_beta > 0.0 && backtrack_beta < 1.0)) throw ArgumentError("ml.beta must lie in (0, 1)");
  if (!(grad_tolerance > 0.0)) throw ArgumentError("ml.epsilon must be positive");
  if (max_outer_iters < 1) throw ArgumentError("ml.max_outer_iters must be positive");
  if (max_backtracks < 1) throw ArgumentError("ml.max_backtracks must be positive");
}

double MLGradient::norm() const { return std::hypot(d_azimuth, d_elevation); }

Eigen::MatrixXcd subset_covariance(const SnapshotSet& snaps, const std::vector<std::size_t>& subset) {
  check_subset(subset, snaps.n_sensors());
  const std::size_t k = subset.size();
  Eigen::MatrixXcd r(at(k), at(k));
  const double inv_l = 1.0 / static_cast<double>(snaps.n_snapshots());
  for (std::size_t p = 0; p < k; ++p) {
    const auto xp = snaps.row(subset[p]);
    r(at(p), at(p)) = xp.squaredNorm() * inv_l;
    for (std::size_t q = p + 1; q < k; ++q) {
      const cdouble v = sample_covariance(subset[p], subset[q], snaps).value;
      r(at(p), at(q)) = v;
      r(at(q), at(p)) = std::conj(v);
    }
  }
  return r;
}

Eigen::MatrixXcd model_matrix(double azimuth, double elevation, const ArrayConfig& cfg,
                              const std::vector<std::size_t>& subset) {
  const std::size_t k = subset.size();
  std::vector<double> psi(k);
  for (std::size_t p = 0; p < k; ++p) psi[p] = phase_at_sensor(subset[p], azimuth, elevation, cfg);
  Eigen::MatrixXcd a(at(k), at(k));
  for (std::size_t p = 0; p < k; ++p) {
    a(at(p), at(p)) = 1.0;
    for (std::size_t q = p + 1; q < k; ++q) {
      const cdouble v = std::polar(1.0, psi[p] - psi[q]);
      a(at(p), at(q)) = v;
      a(at(q), at(p)) = std::conj(v);
    }
  }
  return a;
}

SubsetMatrices build_subset_matrices(const SnapshotSet& snaps, const ArrayConfig& cfg, const MLConfig& ml,
                                     double azimuth, double elevation) {
  if (snaps.n_sensors() != cfg.n_sensors()) throw ArgumentError("snapshot rows do not match the array sensor count");
  if (!(elevation > 0.0 && elevation < kPi / 2)) throw ArgumentError("candidate elevation must lie in (0, pi/2)");
  return {model_matrix(azimuth, elevation, cfg, ml.subset), subset_covariance(snaps, ml.subset)};
}

double ml_objective(const SubsetMatrices& m) {
  const cdouble trace = (m.a_matrix * m.r_hat).trace();
  assert(std::abs(trace.imag()) <= 1e-9 * std::max(1.0, std::abs(trace)));
  return -trace.real();
}

MLGradient ml_gradient(const SubsetMatrices& m, double azimuth, double elevation, const ArrayConfig& cfg,
                       const MLConfig& ml) {
  const std::size_t k = ml.subset.size();
  std::vector<double> s(k), c(k);
  for (std::size_t p = 0; p < k; ++p) {
    const double off = azimuth - sensor_polar_angle(ml.subset[p], cfg);
    s[p] = std::sin(off);
    c[p] = std::cos(off);
  }
  double sum_az = 0.0;
  double sum_el = 0.0;
  for (std::size_t p = 0; p + 1 < k; ++p) {
    for (std::size_t q = p + 1; q < k; ++q) {
      const double im = (m.a_matrix(at(p), at(q)) * m.r_hat(at(q), at(p))).imag();
      sum_az += (s[q] - s[p]) * im;
      sum_el += (c[p] - c[q]) * im;
    }
  }
  const double scale = -2.0 * cfg.zeta();
  return {scale * std::sin(elevation) * sum_az, scale * std::cos(elevation) * sum_el};
}

std::optional<double> step_bound(double elevation, const MLGradient& g) {
  if (g.d_elevation < 0.0) return (kPi / 2 - elevation) / -g.d_elevation;
  if (g.d_elevation > 0.0) return elevation / g.d_elevation;
  return std::nullopt;
}

AngleEstimate refine_ml(const SnapshotSet& snaps, const ArrayConfig& cfg, const MLConfig& ml,
                        const AngleEstimate& start, std::vector<MLIterate>* trace) {
  ml.validate(cfg);
  if (snaps.n_sensors() != cfg.n_sensors()) throw ArgumentError("snapshot rows do not match the array sensor count");

  EstimateDiagnostics diag = start.diagnostics.value_or(EstimateDiagnostics{});
  double az = start.azimuth;
  double el = start.elevation;
  if (!std::isfinite(az) || !std::isfinite(el)) throw NumericalError("non-finite ML start point");
  diag.nudged = false;
  if (el <= 0.0) {
    el = kBoundaryNudge;
    diag.nudged = true;
  } else if (el >= kPi / 2) {
    el = kPi / 2 - kBoundaryNudge;
    diag.nudged = true;
  }

  const Eigen::MatrixXcd r_hat = subset_covariance(snaps, ml.subset);
  SubsetMatrices m{model_matrix(az, el, cfg, ml.subset), r_hat};
  double obj = ml_objective(m);
  MLGradient g = ml_gradient(m, az, el, cfg, ml);
  require_finite(obj, "objective", 0);
  require_finite(g.d_azimuth, "gradient", 0);
  require_finite(g.d_elevation, "gradient", 0);
  if (trace) trace->push_back({az, el, obj, g.norm(), 0.0, 0});

  std::size_t iter = 0;
  HaltReason halt = HaltReason::None;
  while (true) {
    const double gnorm = g.norm();
    if (gnorm <= ml.grad_tolerance) {
      halt = HaltReason::GradientTolerance;
      break;
    }
    const std::optional<double> t0 = step_bound(el, g);
    if (!t0 && ml.halt_on_zero_elevation_gradient) {
      halt = HaltReason::ZeroElevationGradient;
      break;
    }
    if (iter >= ml.max_outer_iters) {
      halt = HaltReason::MaxIterations;
      break;
    }

    double t = t0 ? *t0 / ml.m_divisor : 1.0 / (ml.m_divisor * gnorm);
    const double sufficient = ml.armijo_alpha * gnorm * gnorm;
    double trial = objective_at(r_hat, az - t * g.d_azimuth, el - t * g.d_elevation, cfg, ml.subset);
    std::size_t backtracks = 0;
    while (!(trial <= obj - sufficient * t) && backtracks < ml.max_backtracks) {
      t *= ml.backtrack_beta;
      trial = objective_at(r_hat, az - t * g.d_azimuth, el - t * g.d_elevation, cfg, ml.subset);
      ++backtracks;
    }
    require_finite(trial, "objective", iter + 1);
    if (!(trial <= obj - sufficient * t)) {
      halt = HaltReason::LineSearchExhausted;
      break;
    }

    az -= t * g.d_azimuth;
    el -= t * g.d_elevation;
    ++iter;
    if (!(el > 0.0 && el < kPi / 2)) {
      throw NumericalError("elevation left (0, pi/2) at ML iteration " + std::to_string(iter));
    }
    m.a_matrix = model_matrix(az, el, cfg, ml.subset);
    obj = ml_objective(m);
    g = ml_gradient(m, az, el, cfg, ml);
    require_finite(obj, "objective", iter);
    require_finite(g.d_azimuth, "gradient", iter);
    require_finite(g.d_elevation, "gradient", iter);
    if (trace) trace->push_back({az, el, obj, g.norm(), t, backtracks});
  }

  double wrapped = az - kTwoPi * std::floor(az / kTwoPi);
  if (wrapped >= kTwoPi) wrapped = 0.0;
  diag.iterations = iter;
  diag.halt = halt;
  return {wrapped, el, EstimateMethod::ML, diag};
}

}  // namespace ucadoa
