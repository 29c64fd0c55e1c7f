// SPDX-License-Identifier: Apache-2.0
#include "ucadoa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "ucadoa/errors.hpp"

namespace ucadoa {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

template <typename F>
auto to_list(const std::string& key, const std::string& v, F&& item) {
  std::vector<decltype(item(key, std::string{}))> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) throw ConfigError(key, "empty list entry");
    out.push_back(item(key, tok));
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) { return static_cast<std::size_t>(to_uint(key, v)); }

}  // namespace

ArrayConfig ExperimentConfig::array() const { return ArrayConfig(n_sensors, radius_over_wavelength); }

SourceTruth ExperimentConfig::source(double power_db) const {
  return {deg_to_rad(azimuth_deg), deg_to_rad(elevation_deg), db_to_linear(power_db), waveform};
}

NoiseModel ExperimentConfig::noise() const {
  if (!noise_variances.empty()) return NoiseModel(noise_variances);
  return NoiseModel::uniform(n_sensors, noise_variance);
}

std::vector<std::size_t> ExperimentConfig::ml_subset() const {
  if (!ml.subset.empty()) return ml.subset;
  return MLConfig::strided_subset(n_sensors, std::max<std::size_t>(1, n_sensors / 6));
}

MLConfig ExperimentConfig::ml_config() const {
  MLConfig out = ml;
  out.subset = ml_subset();
  return out;
}

void ExperimentConfig::validate() const {
  std::optional<ArrayConfig> arr;
  try {
    arr.emplace(n_sensors, radius_over_wavelength);
  } catch (const ArgumentError& e) {
    throw ConfigError(n_sensors < 8 || n_sensors % 4 ? "array.n_sensors" : "array.radius_over_wavelength", e.what());
  }
  if (!(azimuth_deg >= 0.0 && azimuth_deg < 360.0)) throw ConfigError("source.azimuth_deg", "must lie in [0, 360)");
  if (!(elevation_deg > 0.0 && elevation_deg < 90.0)) throw ConfigError("source.elevation_deg", "must lie in (0, 90)");
  if (power_db_grid.empty()) throw ConfigError("source.power_db_grid", "must not be empty");
  if (std::adjacent_find(power_db_grid.begin(), power_db_grid.end(), std::greater_equal<>{}) != power_db_grid.end()) {
    throw ConfigError("source.power_db_grid", "must be strictly ascending");
  }
  if (!(noise_variance >= 0.0)) throw ConfigError("noise.variance", "must be non-negative");
  if (!noise_variances.empty()) {
    if (noise_variances.size() != n_sensors) throw ConfigError("noise.variances", "needs one entry per sensor");
    if (std::any_of(noise_variances.begin(), noise_variances.end(), [](double v) { return !(v >= 0.0); })) {
      throw ConfigError("noise.variances", "entries must be non-negative");
    }
  }
  if (snapshots < 1) throw ConfigError("snapshots", "must be at least 1");
  if (runs < 1) throw ConfigError("runs", "must be at least 1");
  if (ml_enable) {
    try {
      ml_config().validate(*arr);
    } catch (const ArgumentError& e) {
      const std::string msg = e.what();
      const auto dot = msg.find(' ');
      throw ConfigError(msg.rfind("ml.", 0) == 0 ? msg.substr(0, dot) : "ml", msg);
    }
  }
  if (crlb_enable) {
    const NoiseModel nm = noise();
    if (!nm.is_uniform()) throw ConfigError("crlb.enable", "the bound requires uniform noise");
    if (!(nm.variances().front() > 0.0)) throw ConfigError("crlb.enable", "the bound requires a positive noise variance");
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::optional<std::size_t> stride;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"array.n_sensors", [&](auto& k, auto& v) { c.n_sensors = to_size(k, v); }},
      {"array.radius_over_wavelength", [&](auto& k, auto& v) { c.radius_over_wavelength = to_double(k, v); }},
      {"source.azimuth_deg", [&](auto& k, auto& v) { c.azimuth_deg = to_double(k, v); }},
      {"source.elevation_deg", [&](auto& k, auto& v) { c.elevation_deg = to_double(k, v); }},
      {"source.power_db_grid", [&](auto& k, auto& v) { c.power_db_grid = to_list(k, v, to_double); }},
      {"source.waveform",
       [&](auto& k, auto& v) {
         if (v == "constant") c.waveform = Waveform::ConstantAmplitude;
         else if (v == "random_phase") c.waveform = Waveform::RandomPhase;
         else throw ConfigError(k, "expected constant or random_phase, got '" + v + "'");
       }},
      {"noise.variance", [&](auto& k, auto& v) { c.noise_variance = to_double(k, v); }},
      {"noise.variances", [&](auto& k, auto& v) { c.noise_variances = to_list(k, v, to_double); }},
      {"snapshots", [&](auto& k, auto& v) { c.snapshots = to_size(k, v); }},
      {"runs", [&](auto& k, auto& v) { c.runs = to_size(k, v); }},
      {"seed", [&](auto& k, auto& v) { c.seed = to_uint(k, v); }},
      {"ml.enable", [&](auto& k, auto& v) { c.ml_enable = to_bool(k, v); }},
      {"ml.subset", [&](auto& k, auto& v) { c.ml.subset = to_list(k, v, to_size); }},
      {"ml.subset_stride",
       [&](auto& k, auto& v) {
         stride = to_size(k, v);  // expanded after parsing, once N is known
         if (*stride == 0) throw ConfigError(k, "must be positive");
       }},
      {"ml.m_divisor", [&](auto& k, auto& v) { c.ml.m_divisor = to_double(k, v); }},
      {"ml.alpha", [&](auto& k, auto& v) { c.ml.armijo_alpha = to_double(k, v); }},
      {"ml.beta", [&](auto& k, auto& v) { c.ml.backtrack_beta = to_double(k, v); }},
      {"ml.epsilon", [&](auto& k, auto& v) { c.ml.grad_tolerance = to_double(k, v); }},
      {"ml.max_outer_iters", [&](auto& k, auto& v) { c.ml.max_outer_iters = to_size(k, v); }},
      {"ml.max_backtracks", [&](auto& k, auto& v) { c.ml.max_backtracks = to_size(k, v); }},
      {"ml.halt_on_zero_elevation_gradient",
       [&](auto& k, auto& v) { c.ml.halt_on_zero_elevation_gradient = to_bool(k, v); }},
      {"crlb.enable", [&](auto& k, auto& v) { c.crlb_enable = to_bool(k, v); }},
  };

  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
    if (!seen.emplace(key, line_no).second) throw ConfigError(key, "given twice");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(key, value);
  }

  if (stride) {
    if (seen.count("ml.subset")) throw ConfigError("ml.subset_stride", "conflicts with ml.subset");
    c.ml.subset = MLConfig::strided_subset(c.n_sensors, *stride);
    if (c.ml.subset.empty()) throw ConfigError("ml.subset_stride", "larger than the sensor count");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  return parse_config(in);
}

}  // namespace ucadoa
