// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/covariance.hpp"

#include <cmath>
#include <string>

#include "ucadoa/errors.hpp"

namespace ucadoa {

cdouble exact_covariance(std::size_t i, std::size_t j, const SourceTruth& src, const ArrayConfig& cfg) {
  if (i == j) throw ArgumentError("exact covariance is defined for distinct sensors only");
  return src.power * std::polar(1.0, phase_at_sensor(i, src, cfg) - phase_at_sensor(j, src, cfg));
}

PairCovariance sample_covariance(std::size_t i, std::size_t j, const SnapshotSet& snaps) {
  if (i == j) throw ArgumentError("sample covariance pair needs distinct sensors");
  const std::size_t n = snaps.n_sensors();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw ArgumentError("sensor pair (" + std::to_string(i) + ", " + std::to_string(j) + ") outside [1, " +
                        std::to_string(n) + "]");
  }
  const auto xi = snaps.row(i);
  const auto xj = snaps.row(j);
  cdouble acc{};
  for (Eigen::Index l = 0; l < xi.size(); ++l) acc += xi(l) * std::conj(xj(l));
  return {i, j, acc / static_cast<double>(snaps.n_snapshots())};
}

double principal_argument(cdouble r) {
  const double re = r.real();
  const double im = r.imag();
  if (re > 0.0) return std::atan(im / re);
  if (re < 0.0) {
    const double base = std::atan(im / re);
    if (im < 0.0) return base - kPi;
    return base + kPi;  // im >= 0, the negative real axis included
  }
  if (im > 0.0) return kPi / 2;
  if (im < 0.0) return -kPi / 2;
  throw DegenerateInputError("argument of a zero covariance is undefined");
}

}  // namespace ucadoa
