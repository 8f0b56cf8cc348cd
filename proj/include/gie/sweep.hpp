#pragma once

// Parameter grids, entanglement-generation rates and multi-curve time
// series built on top of the analytic and Fock backends. All model
// quantities are dimensionless (omega_tilde = 1) unless the caller supplies
// SI-derived ModelParams.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gie/analytic.hpp"
#include "gie/fock.hpp"
#include "gie/units.hpp"

namespace gie::sweep {

enum class AxisParam { F, Delta, GA, GB, Gamma, S, T, Alpha0 };

const char* axis_param_name(AxisParam p);
/// Accepts F, delta, g_a, g_b, gamma, s, t, alpha0; throws InvalidAxis.
AxisParam parse_axis_param(const std::string& name);

enum class AxisScale { Linear, Log, List };

const char* axis_scale_name(AxisScale s);
AxisScale parse_axis_scale(const std::string& name);

struct SweepAxis {
  AxisParam param = AxisParam::F;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 2;
  AxisScale scale = AxisScale::Linear;
  std::vector<double> values;  // used when scale == List

  /// Throws InvalidAxis on count < 2, a non-positive log range or an empty list.
  void validate() const;
  std::vector<double> grid() const;

  bool operator==(const SweepAxis&) const = default;
};

/// Fixed parameters every cell starts from.
struct ModelPoint {
  units::ModelParams model;
  analytic::Dephasing dephasing;
  analytic::MediatorInit init;
};

/// When a cell is evaluated: a number of mediator periods 2 pi n / omega_s
/// (re-derived per cell) or a fixed time.
struct TimeRule {
  enum class Kind { Periods, Fixed };
  Kind kind = Kind::Periods;
  double periods = 1.0;
  double t = 0.0;

  double time_for(const units::SqueezedFrame& frame) const;

  bool operator==(const TimeRule&) const = default;
};

enum class Backend { Analytic, Fock, Both };

const char* backend_name(Backend b);
Backend parse_backend(const std::string& name);

/// Settings for the Fock backend when it is requested.
struct OracleSettings {
  fock::Frame frame = fock::Frame::Squeezed;
  double tail_threshold = 1e-8;
  double tolerance = 1e-4;
  std::size_t n_start = 2;
  std::size_t n_max = 512;

  bool operator==(const OracleSettings&) const = default;
};

struct SweepSpec {
  std::string name;
  std::vector<SweepAxis> axes;
  ModelPoint base;
  TimeRule time;
  Backend backend = Backend::Analytic;
  OracleSettings oracle;
  double en_clamp = 1e-12;  // values below this are reported as 0

  void validate() const;
  std::vector<std::size_t> shape() const;
};

struct SweepCell {
  std::vector<double> coords;
  bool valid = true;
  double en = 0.0;       // analytic; NaN when invalid or not requested
  double en_fock = 0.0;  // NaN unless the Fock backend ran
  std::size_t cutoff = 0;
  double s = 0.0;
  double omega_s = 0.0;
  double g_a_s = 0.0;
  double g_b_s = 0.0;
  double g_eff = 0.0;
  double t = 0.0;
  std::string error;  // e.g. "UnstableFrameCell: ..."

  /// The value used downstream: analytic when available, else Fock.
  double value() const;
};

struct Provenance {
  std::string config_hash;
  std::string code_version;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::size_t> shape;
  std::vector<std::vector<double>> axis_values;
  std::vector<SweepCell> cells;  // row-major, last axis fastest
  std::size_t invalid_cells = 0;
  Provenance provenance;

  const SweepCell& at(const std::vector<std::size_t>& index) const;
};

/// Evaluates every cell; unstable cells (delta <= 0) and backend failures are
/// recorded on the cell and the run continues.
SweepResult run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// Applies a single axis value to a model point (exposed for tests).
void apply_axis(AxisParam p, double value, ModelPoint& point, TimeRule& rule);

enum class RateVariable { GA, GB };

struct ZeroCrossing {
  double g;
  int direction;  // +1 when eta goes from negative to positive
};

struct RateLine {
  std::vector<double> fixed;  // values of the other axes, in axis order
  std::vector<double> g;
  std::vector<double> en;
  std::vector<double> eta;
  std::vector<ZeroCrossing> zeros;
};

struct RateResult {
  RateVariable variable = RateVariable::GB;
  std::size_t axis = 0;
  std::vector<RateLine> lines;
  SweepResult sweep;
};

/// d(EN)/dg along the g_a or g_b axis of `spec` by central differences with
/// the neighbouring grid spacing (one-sided at the ends). One line per
/// combination of the remaining axes. Throws InvalidAxis if the axis is
/// missing and InsufficientPoints below three points.
RateResult entanglement_rate(const SweepSpec& spec, RateVariable which, unsigned threads = 1);

/// Derivative helper used by entanglement_rate.
std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y);
std::vector<ZeroCrossing> zero_crossings(const std::vector<double>& x,
                                         const std::vector<double>& y);

struct SeriesVariant {
  std::string label;
  ModelPoint point;
};

struct TimeseriesSpec {
  std::string name;
  std::vector<SeriesVariant> variants;
  std::vector<double> t_grid;
  Backend backend = Backend::Both;
  OracleSettings oracle;
  std::optional<std::size_t> cutoff;  // fixed N instead of convergence
  double en_clamp = 1e-12;

  void validate() const;
};

struct SeriesColumns {
  std::string label;
  units::SqueezedFrame frame;
  std::vector<double> analytic;               // TP-qubit
  std::vector<fock::CutEntanglement> oracle;  // all cuts
  std::size_t cutoff = 0;
  double tail = 0.0;
};

struct TimeseriesTable {
  TimeseriesSpec spec;
  std::vector<SeriesColumns> series;
  Provenance provenance;
};

TimeseriesTable timeseries_figure(const TimeseriesSpec& spec, unsigned threads = 1);

/// count >= 2 evenly spaced points on [t0, t1].
std::vector<double> linspace(double t0, double t1, std::size_t count);

}  // namespace gie::sweep
