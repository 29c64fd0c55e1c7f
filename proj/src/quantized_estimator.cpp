// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/quantized_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucadoa/covariance.hpp"
#include "ucadoa/errors.hpp"

namespace ucadoa {

namespace {

double wrap_2pi(double angle) {
  double w = angle - kTwoPi * std::floor(angle / kTwoPi);
  return w >= kTwoPi ? 0.0 : w;
}

void check_pairs(const std::vector<cdouble>& pairs, const ArrayConfig& cfg) {
  if (pairs.size() != cfg.n_sensors() / 2) {
    throw ArgumentError("expected " + std::to_string(cfg.n_sensors() / 2) + " pair covariances, got " +
                        std::to_string(pairs.size()));
  }
}

// r(i*+N/4) when i* <= N/4, r(i*-N/4) otherwise. Both lie inside the scanned range.
std::size_t disambiguation_index(std::size_t i_star, std::size_t n) {
  return i_star <= n / 4 ? i_star + n / 4 : i_star - n / 4;
}

}  // namespace

std::string_view to_string(EstimateMethod m) { return m == EstimateMethod::ML ? "ML" : "Quantized"; }

std::string_view to_string(AzimuthBranch b) {
  switch (b) {
    case AzimuthBranch::PlusHalfPi: return "PlusHalfPi";
    case AzimuthBranch::PlusThreeHalvesPi: return "PlusThreeHalvesPi";
    case AzimuthBranch::MinusHalfPi: return "MinusHalfPi";
  }
  return "?";
}

std::string_view to_string(HaltReason h) {
  switch (h) {
    case HaltReason::None: return "none";
    case HaltReason::GradientTolerance: return "gradient_tolerance";
    case HaltReason::ZeroElevationGradient: return "zero_elevation_gradient";
    case HaltReason::MaxIterations: return "max_iterations";
    case HaltReason::LineSearchExhausted: return "line_search_exhausted";
  }
  return "?";
}

std::size_t select_pair(const std::vector<cdouble>& pair_covariances) {
  if (pair_covariances.empty()) throw ArgumentError("no pair covariances to scan");
  std::size_t best = 1;
  double min_abs = std::abs(pair_covariances[0].imag());
  for (std::size_t i = 2; i <= pair_covariances.size(); ++i) {
    const double v = std::abs(pair_covariances[i - 1].imag());
    if (v < min_abs) {
      best = i;
      min_abs = v;
    }
  }
  return best;
}

PairScan antipodal_pair_scan(const SnapshotSet& snaps, const ArrayConfig& cfg) {
  const std::size_t n = cfg.n_sensors();
  if (snaps.n_sensors() != n) throw ArgumentError("snapshot rows do not match the array sensor count");
  PairScan scan;
  scan.pair_covariances.reserve(n / 2);
  for (std::size_t i = 1; i <= n / 2; ++i) scan.pair_covariances.push_back(sample_covariance(i, i + n / 2, snaps).value);
  scan.i_star = select_pair(scan.pair_covariances);
  return scan;
}

AzimuthResolution resolve_azimuth(std::size_t i_star, const std::vector<cdouble>& pair_covariances,
                                  const ArrayConfig& cfg) {
  check_pairs(pair_covariances, cfg);
  const std::size_t n = cfg.n_sensors();
  if (i_star < 1 || i_star > n / 2) throw ArgumentError("selected pair index outside [1, N/2]");

  const cdouble r = pair_covariances[disambiguation_index(i_star, n) - 1];
  if (r == cdouble{}) throw DegenerateInputError("disambiguation covariance is exactly zero");

  const double theta = sensor_polar_angle(i_star, cfg);
  AzimuthResolution out{0.0, AzimuthBranch::PlusHalfPi, r};
  if (i_star <= n / 4) {
    out.branch = r.imag() < 0.0 ? AzimuthBranch::PlusHalfPi : AzimuthBranch::PlusThreeHalvesPi;
  } else {
    out.branch = r.imag() > 0.0 ? AzimuthBranch::PlusHalfPi : AzimuthBranch::MinusHalfPi;
  }
  switch (out.branch) {
    case AzimuthBranch::PlusHalfPi: out.azimuth = theta + kPi / 2; break;
    case AzimuthBranch::PlusThreeHalvesPi: out.azimuth = theta + 3 * kPi / 2; break;
    case AzimuthBranch::MinusHalfPi: out.azimuth = theta - kPi / 2; break;
  }
  out.azimuth = wrap_2pi(out.azimuth);
  return out;
}

ElevationResolution resolve_elevation(std::size_t i_star, AzimuthBranch branch,
                                      const std::vector<cdouble>& pair_covariances, const ArrayConfig& cfg) {
  check_pairs(pair_covariances, cfg);
  const std::size_t n = cfg.n_sensors();
  if (i_star < 1 || i_star > n / 2) throw ArgumentError("selected pair index outside [1, N/2]");

  const double arg = principal_argument(pair_covariances[disambiguation_index(i_star, n) - 1]);
  // Lower quarter: the +pi/2 branch divides by -2 zeta. Upper quarter: the -pi/2 branch does.
  const bool negative_divisor = i_star <= n / 4 ? branch == AzimuthBranch::PlusHalfPi
                                                : branch == AzimuthBranch::MinusHalfPi;
  const double operand = arg / ((negative_divisor ? -2.0 : 2.0) * cfg.zeta());
  if (!std::isfinite(operand)) throw NumericalError("elevation arcsine operand is not finite");

  ElevationResolution out;
  out.clamped = operand > 1.0 || operand < -1.0;
  out.elevation = std::asin(std::clamp(operand, -1.0, 1.0));
  return out;
}

AngleEstimate estimate_from_pairs(const std::vector<cdouble>& pair_covariances, const ArrayConfig& cfg) {
  check_pairs(pair_covariances, cfg);
  const std::size_t i_star = select_pair(pair_covariances);
  const AzimuthResolution az = resolve_azimuth(i_star, pair_covariances, cfg);
  const ElevationResolution el = resolve_elevation(i_star, az.branch, pair_covariances, cfg);

  EstimateDiagnostics diag;
  diag.i_star = i_star;
  diag.min_abs_imag = std::abs(pair_covariances[i_star - 1].imag());
  diag.branch = az.branch;
  diag.clamped = el.clamped;
  diag.covariance_evaluations = pair_covariances.size();
  return {az.azimuth, el.elevation, EstimateMethod::Quantized, diag};
}

AngleEstimate estimate_quantized(const SnapshotSet& snaps, const ArrayConfig& cfg) {
  return estimate_from_pairs(antipodal_pair_scan(snaps, cfg).pair_covariances, cfg);
}

std::vector<double> quantized_azimuth_grid(const ArrayConfig& cfg) {
  const std::size_t n = cfg.n_sensors();
  std::vector<double> grid;
  grid.reserve(n);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    const double theta = sensor_polar_angle(i, cfg);
    grid.push_back(wrap_2pi(theta + kPi / 2));
    grid.push_back(wrap_2pi(theta + 3 * kPi / 2));
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace ucadoa
