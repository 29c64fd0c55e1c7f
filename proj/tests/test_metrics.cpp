// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ucadoa/errors.hpp"
#include "ucadoa/metrics.hpp"
#include "ucadoa/ml_refiner.hpp"

using namespace ucadoa;

TEST_CASE("wrapped difference") {
  CHECK(wrapped_difference(0.1, kTwoPi - 0.1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(wrapped_difference(1.234, 1.234) == 0.0);
  CHECK(wrapped_difference(kPi + 0.3, 0.0) == doctest::Approx(-(kPi - 0.3)).epsilon(1e-12));
  CHECK(wrapped_difference(kPi, 0.0) == kPi);
  CHECK(wrapped_difference(0.0, kPi) == kPi);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int k = 0; k < 5000; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const double d = wrapped_difference(a, b);
    CHECK(d > -kPi);
    CHECK(d <= kPi);
    CHECK(std::abs(d) == doctest::Approx(std::abs(wrapped_difference(b, a))).epsilon(1e-12));
    CHECK(std::abs(wrapped_difference(a, c)) <=
          std::abs(wrapped_difference(a, b)) + std::abs(wrapped_difference(b, c)) + 1e-12);
  }
}

TEST_CASE("error accumulation") {
  const SourceTruth truth{1.0, 0.5, 1.0};
  const AngleEstimate exact{1.0, 0.5, EstimateMethod::Quantized, std::nullopt};
  ErrorStats s = accumulate_errors({exact, exact, exact}, truth);
  CHECK(s.mse_azimuth == 0.0);
  CHECK(s.mse_elevation == 0.0);
  CHECK(s.n_runs == 3);

  s = accumulate_errors({AngleEstimate{1.01, 0.5, EstimateMethod::ML, std::nullopt}}, truth);
  CHECK(s.mse_azimuth == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK(s.bias_azimuth == doctest::Approx(0.01).epsilon(1e-9));

  // Wrapping: truth just above zero, estimate just below 2 pi.
  const SourceTruth near_zero{0.01, 0.5, 1.0};
  s = accumulate_errors({AngleEstimate{kTwoPi - 0.01, 0.5, EstimateMethod::ML, std::nullopt}}, near_zero);
  CHECK(s.mse_azimuth == doctest::Approx(4e-4).epsilon(1e-9));

  s = accumulate_errors({std::nullopt, AngleEstimate{1.02, 0.47, EstimateMethod::ML, std::nullopt}}, truth);
  CHECK(s.n_runs == 2);
  CHECK(s.n_failures == 1);
  CHECK(s.mse_azimuth == doctest::Approx(4e-4).epsilon(1e-9));
  CHECK(s.mse_elevation == doctest::Approx(9e-4).epsilon(1e-9));

  s = accumulate_errors({std::nullopt}, truth);
  CHECK(std::isnan(s.mse_azimuth));
  CHECK(s.n_failures == 1);

  CHECK_THROWS_AS(accumulate_errors({}, truth), ArgumentError);

  ErrorAccumulator a, b, all;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.01);
  for (int k = 0; k < 100; ++k) {
    const AngleEstimate e{1.0 + g(rng), 0.5 + g(rng), EstimateMethod::ML, std::nullopt};
    (k % 3 ? a : b).add(e, truth);
    all.add(e, truth);
  }
  a.merge(b);
  CHECK(a.stats().mse_azimuth == doctest::Approx(all.stats().mse_azimuth).epsilon(1e-12));
  CHECK(a.stats().n_runs == 100);
}

TEST_CASE("quantization floor for 110 deg on N = 120") {
  const ArrayConfig cfg(120, 0.25);
  // Grid steps of 3 deg put candidates at 108 and 111 deg.
  CHECK(grid_offset_squared(deg_to_rad(110), cfg) == doctest::Approx(std::pow(deg_to_rad(1.0), 2)).epsilon(1e-9));
  const SourceTruth src{deg_to_rad(110), deg_to_rad(44), 1.0};
  std::vector<std::optional<AngleEstimate>> runs;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    runs.push_back(estimate_quantized(synthesize_snapshots(src, cfg, NoiseModel::uniform(120, 0.0), 10, seed), cfg));
  }
  CHECK(accumulate_errors(runs, src).mse_azimuth == doctest::Approx(std::pow(deg_to_rad(1.0), 2)).epsilon(1e-9));
}

TEST_CASE("steering jacobian matches finite differences") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> az(0.0, kTwoPi), el(0.1, kPi / 2 - 0.1);
  const ArrayConfig cfg(120, 0.25);
  const auto sensors = MLConfig::strided_subset(120, 1);
  for (int k = 0; k < 30; ++k) {
    const double a = az(rng), e = el(rng), h = 1e-6;
    const Eigen::MatrixX2cd d = steering_jacobian(a, e, cfg, sensors);
    const Eigen::VectorXcd fa =
        (steering_vector(a + h, e, cfg, sensors) - steering_vector(a - h, e, cfg, sensors)) / (2 * h);
    const Eigen::VectorXcd fe =
        (steering_vector(a, e + h, cfg, sensors) - steering_vector(a, e - h, cfg, sensors)) / (2 * h);
    CHECK((d.col(0) - fa).norm() <= 1e-6 * fa.norm());
    CHECK((d.col(1) - fe).norm() <= 1e-6 * fe.norm());
  }
}

TEST_CASE("crlb scaling, monotonicity and subset ordering") {
  const ArrayConfig cfg(120, 0.25);
  const SourceTruth src{deg_to_rad(110), deg_to_rad(44), 1.0};
  const auto noise = NoiseModel::uniform(120, 1.0);
  const auto subset = MLConfig::strided_subset(120, 20);

  const CrlbPoint base = crlb_point(cfg, src, 200, noise, subset);
  CHECK(base.crlb_azimuth > 0.0);
  CHECK(base.crlb_elevation > 0.0);
  const CrlbPoint double_l = crlb_point(cfg, src, 400, noise, subset);
  CHECK(double_l.crlb_azimuth == doctest::Approx(base.crlb_azimuth / 2).epsilon(1e-12));
  CHECK(double_l.crlb_elevation == doctest::Approx(base.crlb_elevation / 2).epsilon(1e-12));
  SourceTruth twice = src;
  twice.power = 2.0;
  const CrlbPoint double_p = crlb_point(cfg, twice, 200, noise, subset);
  CHECK(double_p.crlb_azimuth == doctest::Approx(base.crlb_azimuth / 2).epsilon(1e-12));
  CHECK(double_p.crlb_elevation == doctest::Approx(base.crlb_elevation / 2).epsilon(1e-12));

  const auto curve = crlb_curve(cfg, src, 200, noise, {0, 4, 8, 12, 16}, subset);
  REQUIRE(curve.size() == 5);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    CHECK(curve[k].power_db == doctest::Approx(4.0 * double(k)));
    CHECK(curve[k].crlb_azimuth < curve[k - 1].crlb_azimuth);
    CHECK(curve[k].crlb_elevation < curve[k - 1].crlb_elevation);
  }

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> az(0.0, kTwoPi), el(0.1, kPi / 2 - 0.1);
  for (int k = 0; k < 50; ++k) {
    const SourceTruth s{az(rng), el(rng), 1.0};
    const CrlbPoint sub = crlb_point(cfg, s, 200, noise, subset);
    const CrlbPoint full = crlb_point(cfg, s, 200, noise);
    CHECK(sub.crlb_azimuth >= full.crlb_azimuth);
    CHECK(sub.crlb_elevation >= full.crlb_elevation);
  }
}

TEST_CASE("crlb matches an independent closed form for the full array") {
  // Full UCA: sum_n cos^2, sin^2 = N/2, cross terms and means vanish; the projection
  // removes nothing, so J = (2 L P / s^2) zeta^2 (N/2) diag(sin^2 el, cos^2 el).
  const ArrayConfig cfg(64, 0.2);
  const SourceTruth src{0.7, 0.9, 3.0};
  const double inv =
      1.0 / (2.0 * 100 * src.power / 0.5 * cfg.zeta() * cfg.zeta() * 32.0);
  const CrlbPoint p = crlb_point(cfg, src, 100, NoiseModel::uniform(64, 0.5));
  CHECK(p.crlb_azimuth == doctest::Approx(inv / std::pow(std::sin(0.9), 2)).epsilon(1e-10));
  CHECK(p.crlb_elevation == doctest::Approx(inv / std::pow(std::cos(0.9), 2)).epsilon(1e-10));
}

TEST_CASE("crlb errors") {
  const ArrayConfig cfg(8, 0.25);
  const SourceTruth src{1.0, 0.5, 1.0};
  CHECK_THROWS_AS(crlb_point(cfg, src, 10, NoiseModel({1, 2, 1, 1, 1, 1, 1, 1})), ArgumentError);
  CHECK_THROWS_AS(crlb_point(cfg, src, 10, NoiseModel::uniform(8, 0.0)), DegenerateInputError);
  // Two sensors cannot resolve two angles.
  CHECK_THROWS_AS(crlb_point(cfg, src, 10, NoiseModel::uniform(8, 1.0), {1, 5}), DegenerateInputError);
  CHECK_THROWS_AS(crlb_point(cfg, {1.0, kPi / 2, 1.0}, 10, NoiseModel::uniform(8, 1.0)), ArgumentError);
}
