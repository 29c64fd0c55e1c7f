// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/sweep.hpp"

#include <ostream>

#include "ucadoa/errors.hpp"
#include "ucadoa/ml_refiner.hpp"
#include "ucadoa/snapshot_io.hpp"

namespace ucadoa {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t grid_index, std::uint64_t run) {
  // splitmix64 is a bijection, so distinct (grid, run) words give distinct seeds.
  return splitmix64(splitmix64(base_seed) ^ ((grid_index << 32) | (run & 0xffffffffULL)));
}

RunOutcome run_trial(const ExperimentConfig& config, std::size_t grid_index, std::size_t run) {
  const ArrayConfig arr = config.array();
  const SourceTruth src = config.source(config.power_db_grid.at(grid_index));
  const SnapshotSet snaps =
      synthesize_snapshots(src, arr, config.noise(), config.snapshots, derive_run_seed(config.seed, grid_index, run));
  RunOutcome out;
  try {
    out.quantized = estimate_quantized(snaps, arr);
  } catch (const DegenerateInputError&) {
    return out;
  } catch (const NumericalError&) {
    return out;
  }
  if (config.ml_enable) {
    try {
      out.ml = refine_ml(snaps, arr, config.ml_config(), *out.quantized);
    } catch (const DegenerateInputError&) {
    } catch (const NumericalError&) {
    }
  }
  return out;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  const std::size_t n_grid = config.power_db_grid.size();
  std::vector<RunOutcome> outcomes(n_grid * config.runs);
  parallel_for(outcomes.size(), workers, [&](std::size_t k) {
    outcomes[k] = run_trial(config, k / config.runs, k % config.runs);
  });

  std::vector<CrlbPoint> crlb;
  if (config.crlb_enable) crlb = config_crlb_curve(config);

  std::vector<SweepRow> rows;
  rows.reserve(n_grid);
  for (std::size_t g = 0; g < n_grid; ++g) {
    const SourceTruth truth = config.source(config.power_db_grid[g]);
    ErrorAccumulator quant, ml;
    for (std::size_t r = 0; r < config.runs; ++r) {
      const RunOutcome& o = outcomes[g * config.runs + r];
      if (o.quantized) quant.add(*o.quantized, truth);
      else quant.add_failure();
      if (config.ml_enable) {
        if (o.ml) ml.add(*o.ml, truth);
        else ml.add_failure();
      }
    }
    SweepRow row;
    row.power_db = config.power_db_grid[g];
    row.quantized = quant.stats();
    if (config.ml_enable) row.ml = ml.stats();
    if (config.crlb_enable) row.crlb = crlb[g];
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "# power_db in dB; mse_* and crlb_* in rad^2; crlb_* is the deterministic single-source bound "
         "(waveform as nuisance); empty cells mean disabled\n";
  out << "power_db,mse_az_quant,mse_el_quant,mse_az_ml,mse_el_ml,crlb_az,crlb_el,n_failures_quant,n_failures_ml\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.power_db) << ',' << format_double(r.quantized.mse_azimuth) << ','
        << format_double(r.quantized.mse_elevation) << ',';
    out << cell(r.ml ? std::optional(r.ml->mse_azimuth) : std::nullopt) << ','
        << cell(r.ml ? std::optional(r.ml->mse_elevation) : std::nullopt) << ',';
    out << cell(r.crlb ? std::optional(r.crlb->crlb_azimuth) : std::nullopt) << ','
        << cell(r.crlb ? std::optional(r.crlb->crlb_elevation) : std::nullopt) << ',';
    out << r.quantized.n_failures << ',';
    if (r.ml) out << r.ml->n_failures;
    out << '\n';
  }
}

std::vector<CrlbPoint> config_crlb_curve(const ExperimentConfig& config) {
  const std::vector<std::size_t> subset = config.ml_enable ? config.ml_subset() : std::vector<std::size_t>{};
  return crlb_curve(config.array(), config.source(config.power_db_grid.front()), config.snapshots, config.noise(),
                    config.power_db_grid, subset);
}

void write_crlb_csv(std::ostream& out, const std::vector<CrlbPoint>& points) {
  out << "# crlb_* in rad^2; deterministic single-source bound (waveform as nuisance)\n";
  out << "power_db,crlb_az,crlb_el\n";
  for (const CrlbPoint& p : points) {
    out << format_double(p.power_db) << ',' << format_double(p.crlb_azimuth) << ','
        << format_double(p.crlb_elevation) << '\n';
  }
}

void write_estimate_report(std::ostream& out, const AngleEstimate& quantized, const std::optional<AngleEstimate>& ml) {
  const auto line = [&](const AngleEstimate& e) {
    out << to_string(e.method) << " estimate\n";
    out << "  azimuth   = " << format_double(e.azimuth) << " rad (" << format_double(rad_to_deg(e.azimuth))
        << " deg)\n";
    out << "  elevation = " << format_double(e.elevation) << " rad (" << format_double(rad_to_deg(e.elevation))
        << " deg)\n";
    if (!e.diagnostics) return;
    const EstimateDiagnostics& d = *e.diagnostics;
    if (e.method == EstimateMethod::Quantized) {
      out << "  i_star = " << d.i_star << ", min_abs_imag = " << format_double(d.min_abs_imag)
          << ", branch = " << to_string(d.branch) << ", clamped = " << (d.clamped ? "true" : "false")
          << ", covariances = " << d.covariance_evaluations << '\n';
    } else {
      out << "  iterations = " << d.iterations << ", halt = " << to_string(d.halt)
          << ", nudged = " << (d.nudged ? "true" : "false") << '\n';
    }
  };
  line(quantized);
  if (ml) line(*ml);
}

}  // namespace ucadoa
