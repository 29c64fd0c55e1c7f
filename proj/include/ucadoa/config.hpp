// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: flat "key = value" text, one entry per line,
// dotted keys for nesting, '#' starts a comment line. Lists are comma
// separated. Angles are given in degrees here and converted on use.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucadoa/array_model.hpp"
#include "ucadoa/ml_refiner.hpp"

namespace ucadoa {

struct ExperimentConfig {
  std::size_t n_sensors = 120;
  double radius_over_wavelength = 0.25;

  double azimuth_deg = 110.0;
  double elevation_deg = 44.0;
  std::vector<double> power_db_grid{0.0};
  Waveform waveform = Waveform::ConstantAmplitude;

  double noise_variance = 1.0;
  std::vector<double> noise_variances;  // overrides noise_variance when non-empty

  std::size_t snapshots = 200;
  std::size_t runs = 1000;
  std::uint64_t seed = 1;

  bool ml_enable = false;
  MLConfig ml;  // empty subset means every (N/6)-th sensor
  bool crlb_enable = false;

  ArrayConfig array() const;
  SourceTruth source(double power_db) const;
  NoiseModel noise() const;
  /// Subset used by the refiner: ml.subset, or the strided default.
  std::vector<std::size_t> ml_subset() const;
  MLConfig ml_config() const;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Parses and validates. Unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace ucadoa
