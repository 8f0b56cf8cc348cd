#pragma once

// JSON run configuration shared by every CLI subcommand.
//
// Top-level keys (all optional except `parameters`):
//   name, description, mode, parameters{dimensionless | si}, mediator,
//   dephasing, backend, oracle, dynamics, sweeps[], rate, validate,
//   feasibility, tolerances, golden, threads, output.
// Unknown keys are rejected with the JSON path of the offending field. A
// top-level "provenance" object, as written next to every output, is ignored.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gie/analytic.hpp"
#include "gie/fock.hpp"
#include "gie/sweep.hpp"
#include "gie/units.hpp"

namespace gie::io {

enum class Mode { Feasibility, Dynamics, Sweep, Rate, Validate };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& name);

/// Model in units of omega_tilde. Exactly one of F and delta.
struct DimensionlessParams {
  double omega_tilde = 1.0;
  double g_a = 0.0;
  double g_b = 0.0;
  std::optional<double> F;
  std::optional<double> delta;
  double omega_a = 0.0;
  double omega_b = 0.0;
  double epsilon = 0.0;

  bool operator==(const DimensionlessParams&) const = default;
};

/// Per-curve or per-sweep changes on top of the base parameters.
struct Overrides {
  std::optional<double> F;
  std::optional<double> delta;
  std::optional<double> s;
  std::optional<double> g_a;
  std::optional<double> g_b;
  std::optional<double> gamma;
  std::optional<double> gamma_tp;
  std::optional<double> epsilon;
  std::optional<cplx> alpha0;
  std::optional<double> xi_mag;
  std::optional<double> theta;

  bool operator==(const Overrides&) const = default;
};

struct Variant {
  std::string label;
  Overrides overrides;

  bool operator==(const Variant&) const = default;
};

enum class TimeUnit { Absolute, Periods };

/// Time grid for `dynamics`. With unit = periods the grid is in multiples of
/// 2 pi / omega_s of the first variant.
struct DynamicsBlock {
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t t_count = 0;
  TimeUnit unit = TimeUnit::Absolute;
  std::vector<Variant> variants;

  bool operator==(const DynamicsBlock&) const = default;
};

struct SweepBlock {
  std::string name;
  std::vector<sweep::SweepAxis> axes;
  sweep::TimeRule time;
  Overrides overrides;
  std::optional<sweep::Backend> backend;

  bool operator==(const SweepBlock&) const = default;
};

struct RateBlock {
  sweep::RateVariable variable = sweep::RateVariable::GB;
  SweepBlock sweep;

  bool operator==(const RateBlock&) const = default;
};

struct ValidateBlock {
  unsigned seed = 20240601;
  std::size_t overlap_samples = 200;
  std::size_t pt_samples = 24;
  std::size_t timeseries_points = 41;
  double max_pt_squeezing = 0.5;
  fock::Frame frame = fock::Frame::Squeezed;
  std::optional<std::string> negative_control;  // "flip_overlap_phase"

  bool operator==(const ValidateBlock&) const = default;
};

struct FeasibilityBlock {
  std::vector<double> gamma_values{0.0, 0.001, 0.005, 0.01};
  int decoupling_index = 1;

  bool operator==(const FeasibilityBlock&) const = default;
};

struct Tolerances {
  double fock_tail = 1e-8;
  double convergence = 1e-4;
  double en_clamp = 1e-12;
  std::size_t n_start = 2;
  std::size_t n_max = 512;

  bool operator==(const Tolerances&) const = default;
};

/// Reference values for `--golden`; keys name rows of the feasibility table.
struct GoldenBlock {
  double rel_tol = 1e-3;
  double en_abs_tol = 1e-3;
  std::map<std::string, double> values;

  bool operator==(const GoldenBlock&) const = default;
};

struct RunConfig {
  std::string name;
  std::string description;
  Mode mode = Mode::Dynamics;
  std::optional<DimensionlessParams> dimensionless;
  std::optional<units::PhysicalSetup> si;
  analytic::MediatorInit mediator;
  analytic::Dephasing dephasing;
  sweep::Backend backend = sweep::Backend::Analytic;
  fock::Frame frame = fock::Frame::Squeezed;
  std::optional<std::size_t> cutoff;
  std::optional<DynamicsBlock> dynamics;
  std::vector<SweepBlock> sweeps;
  std::optional<RateBlock> rate;
  ValidateBlock validate;
  FeasibilityBlock feasibility;
  Tolerances tolerances;
  std::optional<GoldenBlock> golden;
  unsigned threads = 1;
  bool gnuplot = false;

  bool operator==(const RunConfig&) const = default;
};

/// Throws ConfigError naming the JSON path of the first problem.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config_file(const std::string& path);
RunConfig load_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Canonical JSON (sorted keys, defaults written out).
std::string serialize_config(const RunConfig& cfg, int indent = 2);

/// 16 hex digits of FNV-1a over the canonical compact serialization.
std::string config_hash(const RunConfig& cfg);

/// Base model of the configuration (SI configurations are converted).
units::ModelParams base_model(const RunConfig& cfg);

/// Base model with overrides and the config-level mediator and dephasing.
sweep::ModelPoint model_point(const RunConfig& cfg, const Overrides& ov = {});

sweep::OracleSettings oracle_settings(const RunConfig& cfg);
sweep::SweepSpec sweep_spec(const RunConfig& cfg, const SweepBlock& block);
sweep::TimeseriesSpec timeseries_spec(const RunConfig& cfg);

/// Embedded preset JSON, generated at build time.
const std::vector<std::pair<std::string_view, std::string_view>>& preset_table();

}  // namespace gie::io
