// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte Carlo sweeps over a power grid, and the CSV/report writers
// used by the command-line tool.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ucadoa/config.hpp"
#include "ucadoa/metrics.hpp"
#include "ucadoa/quantized_estimator.hpp"

namespace ucadoa {

/// Seed for run `run` at grid point `grid_index`. Injective in (grid_index, run)
/// for indices below 2^32 and any fixed base seed.
std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t grid_index, std::uint64_t run);

/// Runs fn(0..count-1) on `workers` threads. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn);

struct RunOutcome {
  std::optional<AngleEstimate> quantized;  // nullopt: the estimator threw
  std::optional<AngleEstimate> ml;         // nullopt: disabled or failed
};

/// One Monte Carlo trial: synthesize, quantized estimate, optional ML refinement.
RunOutcome run_trial(const ExperimentConfig& config, std::size_t grid_index, std::size_t run);

struct SweepRow {
  double power_db = 0.0;
  ErrorStats quantized;
  std::optional<ErrorStats> ml;
  std::optional<CrlbPoint> crlb;
};

/// Rows come back in grid order and do not depend on `workers`.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers = 1);

/// Header comment, column row, one line per grid point.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// CRLB reference on the configured power grid; uses the ML subset when ML is
/// enabled, the full array otherwise.
std::vector<CrlbPoint> config_crlb_curve(const ExperimentConfig& config);
void write_crlb_csv(std::ostream& out, const std::vector<CrlbPoint>& points);

/// Human-readable estimate report in radians and degrees with diagnostics.
void write_estimate_report(std::ostream& out, const AngleEstimate& quantized, const std::optional<AngleEstimate>& ml);

}  // namespace ucadoa

#include "ucadoa/detail/parallel_for.ipp"
