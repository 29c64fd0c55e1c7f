// SPDX-License-Identifier: Apache-2.0
//
// ucadoa: 2-D direction finding with uniform circular arrays.
//
//   ucadoa sweep    --config <path> --out <path> [--workers N]
//   ucadoa estimate --config <path> --input <path>
//   ucadoa crlb     --config <path> --out <path>
//   ucadoa synth    --config <path> --out <path> --seed <u64>
//
// Exit codes: 0 success, 2 config validation, 3 input parse, 4 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ucadoa/config.hpp"
#include "ucadoa/errors.hpp"
#include "ucadoa/ml_refiner.hpp"
#include "ucadoa/quantized_estimator.hpp"
#include "ucadoa/snapshot_io.hpp"
#include "ucadoa/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumerical = 4;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ucadoa::ConfigError("--out", "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-source azimuth/elevation estimation for uniform circular arrays"};
  app.require_subcommand(1);

  std::string config_path, out_path, input_path;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo MSE sweep over the power grid, written as CSV");
  sweep->add_option("--config", config_path, "Experiment config file")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--workers", workers, "Worker threads (output does not depend on it)")->check(CLI::PositiveNumber);

  auto* estimate = app.add_subcommand("estimate", "Estimate the direction from a snapshot CSV file");
  estimate->add_option("--config", config_path, "Experiment config file")->required();
  estimate->add_option("--input", input_path, "Snapshot CSV file")->required();

  auto* crlb = app.add_subcommand("crlb", "CRLB reference curve over the power grid, written as CSV");
  crlb->add_option("--config", config_path, "Experiment config file")->required();
  crlb->add_option("--out", out_path, "Output CSV path")->required();

  auto* synth = app.add_subcommand("synth", "Synthesize snapshots at the first grid power, written as CSV");
  synth->add_option("--config", config_path, "Experiment config file")->required();
  synth->add_option("--out", out_path, "Output CSV path")->required();
  synth->add_option("--seed", seed, "RNG seed")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ucadoa::ExperimentConfig config = ucadoa::load_config(config_path);

    if (*sweep) {
      const auto rows = ucadoa::run_sweep(config, workers);
      auto out = open_out(out_path);
      ucadoa::write_sweep_csv(out, rows);
    } else if (*crlb) {
      const auto points = ucadoa::config_crlb_curve(config);
      auto out = open_out(out_path);
      ucadoa::write_crlb_csv(out, points);
    } else if (*synth) {
      const auto snaps = ucadoa::synthesize_snapshots(config.source(config.power_db_grid.front()), config.array(),
                                                      config.noise(), config.snapshots, seed);
      auto out = open_out(out_path);
      ucadoa::write_snapshot_csv(out, snaps);
    } else if (*estimate) {
      std::ifstream in(input_path, std::ios::binary);
      if (!in) throw ucadoa::ParseError(0, 0, "cannot open '" + input_path + "'");
      const auto snaps = ucadoa::read_snapshot_csv(in, config.n_sensors);
      const auto arr = config.array();
      const auto quant = ucadoa::estimate_quantized(snaps, arr);
      std::optional<ucadoa::AngleEstimate> ml;
      if (config.ml_enable) ml = ucadoa::refine_ml(snaps, arr, config.ml_config(), quant);
      ucadoa::write_estimate_report(std::cout, quant, ml);
    }
  } catch (const ucadoa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ucadoa::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ucadoa::DegenerateInputError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ucadoa::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ucadoa::ArgumentError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
