// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ucadoa/array_model.hpp"
#include "ucadoa/errors.hpp"

using namespace ucadoa;

TEST_CASE("array config invariants") {
  CHECK_NOTHROW(ArrayConfig(8, 0.25));
  CHECK_NOTHROW(ArrayConfig(120, 0.1));
  CHECK_THROWS_AS(ArrayConfig(4, 0.25), ArgumentError);
  CHECK_THROWS_AS(ArrayConfig(122, 0.25), ArgumentError);
  CHECK_THROWS_AS(ArrayConfig(120, 0.0), ArgumentError);
  CHECK_THROWS_AS(ArrayConfig(120, 0.2500001), ArgumentError);
  CHECK(ArrayConfig(120, 0.25).zeta() == doctest::Approx(kPi / 2).epsilon(1e-15));
}

TEST_CASE("sensor polar angle") {
  const ArrayConfig cfg(120, 0.25);
  CHECK(sensor_polar_angle(1, cfg) == 0.0);
  CHECK(sensor_polar_angle(61, cfg) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(sensor_polar_angle(40, cfg) == doctest::Approx(13.0 * kPi / 20.0).epsilon(1e-15));
  CHECK_THROWS_AS(sensor_polar_angle(0, cfg), ArgumentError);
  CHECK_THROWS_AS(sensor_polar_angle(121, cfg), ArgumentError);
}

TEST_CASE("phase at sensor") {
  const ArrayConfig cfg(120, 0.25);
  // Independent scalar evaluation: -(pi/2) sin(44 deg) cos(110 deg).
  const double expected = -(3.14159265358979323846 / 2) * std::sin(44.0 * 3.14159265358979323846 / 180) *
                          std::cos(110.0 * 3.14159265358979323846 / 180);
  CHECK(expected == doctest::Approx(0.3732).epsilon(1e-4));
  SourceTruth src{deg_to_rad(110), deg_to_rad(44), 1.0};
  CHECK(phase_at_sensor(1, src, cfg) == doctest::Approx(expected).epsilon(1e-14));

  // Right angle between azimuth and sensor bearing.
  CHECK(std::abs(phase_at_sensor(1, kPi / 2, 0.7, cfg)) < 1e-16);
  // Elevation towards zero flattens every phase.
  for (std::size_t n = 1; n <= 120; n += 7) CHECK(std::abs(phase_at_sensor(n, 1.0, 1e-12, cfg)) < 1e-11);
}

TEST_CASE("phase bound and antipodal symmetry") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> az(0.0, kTwoPi), el(1e-3, kPi / 2 - 1e-3), ratio(0.01, 0.25);
  for (int trial = 0; trial < 200; ++trial) {
    const ArrayConfig cfg(4 * (2 + trial % 40), ratio(rng));
    const SourceTruth src{az(rng), el(rng), 1.0};
    const std::size_t n = cfg.n_sensors();
    for (std::size_t k = 1; k <= n; ++k) {
      const double psi = phase_at_sensor(k, src, cfg);
      CHECK(std::abs(psi) <= cfg.zeta() * std::sin(src.elevation) + 1e-15);
      if (k <= n / 2) CHECK(psi == doctest::Approx(-phase_at_sensor(k + n / 2, src, cfg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("noiseless synthesis matches the model exactly") {
  const ArrayConfig cfg(16, 0.2);
  const SourceTruth src{1.1, 0.6, 4.0};
  const auto snaps = synthesize_snapshots(src, cfg, NoiseModel::uniform(16, 0.0), 1, 3);
  REQUIRE(snaps.n_snapshots() == 1);
  for (std::size_t n = 1; n <= 16; ++n) {
    const cdouble expected = 2.0 * std::polar(1.0, phase_at_sensor(n, src, cfg));
    CHECK(snaps.row(n)(0) == expected);
  }
}

TEST_CASE("zero phase sensor sees sqrt(P) plus noise") {
  const ArrayConfig cfg(8, 0.25);
  // Sensor 3 is at 90 degrees, so azimuth 0 gives psi_3 = 0.
  const SourceTruth src{0.0, 0.5, 9.0};
  const auto clean = synthesize_snapshots(src, cfg, NoiseModel::uniform(8, 0.0), 5, 11);
  const auto noisy = synthesize_snapshots(src, cfg, NoiseModel::uniform(8, 1.0), 5, 11);
  for (Eigen::Index l = 0; l < 5; ++l) {
    CHECK(std::abs(clean.row(3)(l) - cdouble(3.0, 0.0)) < 1e-15);
    CHECK(noisy.row(3)(l) != clean.row(3)(l));
  }
}

TEST_CASE("noise power and determinism") {
  const ArrayConfig cfg(120, 0.25);
  const SourceTruth src{deg_to_rad(110), deg_to_rad(44), 1.0};
  const auto noise = NoiseModel::uniform(120, 1.0);
  const auto a = synthesize_snapshots(src, cfg, noise, 200, 42);
  const auto b = synthesize_snapshots(src, cfg, noise, 200, 42);
  CHECK(a.data() == b.data());
  CHECK(a.data() != synthesize_snapshots(src, cfg, noise, 200, 43).data());

  const auto clean = synthesize_snapshots(src, cfg, NoiseModel::uniform(120, 0.0), 200, 42);
  const double mean_power = (a.data() - clean.data()).cwiseAbs2().mean();
  CHECK(std::abs(mean_power - 1.0) < 0.05);

  SourceTruth rp = src;
  rp.waveform = Waveform::RandomPhase;
  const auto r = synthesize_snapshots(rp, cfg, NoiseModel::uniform(120, 0.0), 50, 1);
  for (Eigen::Index l = 0; l < 50; ++l) CHECK(std::abs(r.data()(0, l)) == doctest::Approx(1.0));
}

TEST_CASE("noiseless pair products equal P exp(j (psi_i - psi_j))") {
  const ArrayConfig cfg(24, 0.25);
  SourceTruth src{2.0, 1.0, 2.5, Waveform::RandomPhase};
  const auto snaps = synthesize_snapshots(src, cfg, NoiseModel::uniform(24, 0.0), 4, 9);
  for (std::size_t i = 1; i <= 24; i += 5) {
    for (std::size_t j = 1; j <= 24; j += 3) {
      const cdouble expected = src.power * std::polar(1.0, phase_at_sensor(i, src, cfg) - phase_at_sensor(j, src, cfg));
      for (Eigen::Index l = 0; l < 4; ++l) {
        CHECK(std::abs(snaps.row(i)(l) * std::conj(snaps.row(j)(l)) - expected) < 1e-13);
      }
    }
  }
}

TEST_CASE("invalid synthesis inputs") {
  const ArrayConfig cfg(8, 0.25);
  const SourceTruth ok{1.0, 0.5, 1.0};
  CHECK_THROWS_AS(synthesize_snapshots(ok, cfg, NoiseModel::uniform(8, 1.0), 0, 1), ArgumentError);
  CHECK_THROWS_AS(synthesize_snapshots(ok, cfg, NoiseModel::uniform(7, 1.0), 1, 1), ArgumentError);
  CHECK_THROWS_AS(synthesize_snapshots({1.0, 0.0, 1.0}, cfg, NoiseModel::uniform(8, 1.0), 1, 1), ArgumentError);
  CHECK_THROWS_AS(synthesize_snapshots({kTwoPi, 0.5, 1.0}, cfg, NoiseModel::uniform(8, 1.0), 1, 1), ArgumentError);
  CHECK_THROWS_AS(NoiseModel({1.0, -0.1}), ArgumentError);
  CHECK(NoiseModel::uniform(4, 2.0).is_uniform());
  CHECK_FALSE(NoiseModel({1.0, 2.0}).is_uniform());
}
