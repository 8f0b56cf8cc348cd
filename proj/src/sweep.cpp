#include "gie/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gie/errors.hpp"
#include "gie/negativity.hpp"
#include "gie/parallel.hpp"

namespace gie::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct AxisName {
  AxisParam param;
  const char* name;
};

constexpr AxisName kAxisNames[] = {
    {AxisParam::F, "F"},         {AxisParam::Delta, "delta"}, {AxisParam::GA, "g_a"},
    {AxisParam::GB, "g_b"},      {AxisParam::Gamma, "gamma"}, {AxisParam::S, "s"},
    {AxisParam::T, "t"},         {AxisParam::Alpha0, "alpha0"},
};

}  // namespace

const char* axis_param_name(AxisParam p) {
  for (const auto& a : kAxisNames) {
    if (a.param == p) return a.name;
  }
  return "?";
}

AxisParam parse_axis_param(const std::string& name) {
  for (const auto& a : kAxisNames) {
    if (name == a.name) return a.param;
  }
  throw Error(ErrorCode::InvalidAxis, "unknown sweep axis '" + name +
                                          "' (expected F, delta, g_a, g_b, gamma, s, t, alpha0)");
}

const char* axis_scale_name(AxisScale s) {
  switch (s) {
    case AxisScale::Linear: return "linear";
    case AxisScale::Log: return "log";
    case AxisScale::List: return "list";
  }
  return "?";
}

AxisScale parse_axis_scale(const std::string& name) {
  if (name == "linear") return AxisScale::Linear;
  if (name == "log") return AxisScale::Log;
  if (name == "list") return AxisScale::List;
  throw Error(ErrorCode::InvalidAxis, "unknown axis scale '" + name + "'");
}

void SweepAxis::validate() const {
  const std::string n = axis_param_name(param);
  if (scale == AxisScale::List) {
    if (values.size() < 2) {
      throw Error(ErrorCode::InvalidAxis, "axis " + n + " needs at least 2 listed values");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidAxis, "axis " + n + " has a non-finite value");
    }
    return;
  }
  if (count < 2) throw Error(ErrorCode::InvalidAxis, "axis " + n + " needs count >= 2");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw Error(ErrorCode::InvalidAxis, "axis " + n + " has a non-finite range");
  }
  if (scale == AxisScale::Log && !(min > 0.0 && max > 0.0)) {
    throw Error(ErrorCode::InvalidAxis, "log axis " + n + " needs a positive range");
  }
}

std::vector<double> SweepAxis::grid() const {
  validate();
  if (scale == AxisScale::List) return values;
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = double(i) / double(count - 1);
    g[i] = scale == AxisScale::Log ? std::exp(std::log(min) + u * (std::log(max) - std::log(min)))
                                   : min + u * (max - min);
  }
  g.front() = min;
  g.back() = max;
  return g;
}

double TimeRule::time_for(const units::SqueezedFrame& frame) const {
  return kind == Kind::Periods ? periods * frame.t_period : t;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Analytic: return "analytic";
    case Backend::Fock: return "fock";
    case Backend::Both: return "both";
  }
  return "?";
}

Backend parse_backend(const std::string& name) {
  if (name == "analytic") return Backend::Analytic;
  if (name == "fock") return Backend::Fock;
  if (name == "both") return Backend::Both;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + name + "'");
}

void SweepSpec::validate() const {
  if (axes.empty()) throw Error(ErrorCode::InvalidAxis, "sweep needs at least one axis");
  std::vector<AxisParam> seen;
  for (const auto& a : axes) {
    a.validate();
    if (std::find(seen.begin(), seen.end(), a.param) != seen.end()) {
      throw Error(ErrorCode::InvalidAxis,
                  std::string("axis ") + axis_param_name(a.param) + " appears twice");
    }
    seen.push_back(a.param);
  }
  const bool drive = std::find(seen.begin(), seen.end(), AxisParam::F) != seen.end();
  const bool delta = std::find(seen.begin(), seen.end(), AxisParam::Delta) != seen.end();
  const bool sq = std::find(seen.begin(), seen.end(), AxisParam::S) != seen.end();
  if (int(drive) + int(delta) + int(sq) > 1) {
    throw Error(ErrorCode::InvalidAxis, "F, delta and s axes are mutually exclusive");
  }
  if (time.kind == TimeRule::Kind::Periods && !(time.periods >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "time rule periods must be >= 0");
  }
}

std::vector<std::size_t> SweepSpec::shape() const {
  std::vector<std::size_t> s;
  for (const auto& a : axes) s.push_back(a.scale == AxisScale::List ? a.values.size() : a.count);
  return s;
}

double SweepCell::value() const { return std::isnan(en) ? en_fock : en; }

const SweepCell& SweepResult::at(const std::vector<std::size_t>& index) const {
  if (index.size() != shape.size()) throw Error(ErrorCode::DimensionMismatch, "index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (index[k] >= shape[k]) throw Error(ErrorCode::DimensionMismatch, "index out of range");
    flat = flat * shape[k] + index[k];
  }
  return cells[flat];
}

void apply_axis(AxisParam p, double v, ModelPoint& point, TimeRule& rule) {
  switch (p) {
    case AxisParam::F: point.model.set_F(v); break;
    case AxisParam::Delta: point.model.delta = v; break;
    case AxisParam::GA: point.model.g_a = v; break;
    case AxisParam::GB: point.model.g_b = v; break;
    case AxisParam::Gamma: point.dephasing.qubit = v; break;
    case AxisParam::S: point.model.delta = point.model.omega_tilde * std::exp(-4.0 * v); break;
    case AxisParam::T:
      rule.kind = TimeRule::Kind::Fixed;
      rule.t = v;
      break;
    case AxisParam::Alpha0: point.init.alpha0 = cplx(v, 0.0); break;
  }
}

namespace {

std::vector<std::size_t> unflatten(std::size_t flat, const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> idx(shape.size());
  for (std::size_t k = shape.size(); k-- > 0;) {
    idx[k] = flat % shape[k];
    flat /= shape[k];
  }
  return idx;
}

double analytic_en(const units::SqueezedFrame& frame, const ModelPoint& p, const TimeRule& rule) {
  const analytic::BranchState st =
      rule.kind == TimeRule::Kind::Periods
          ? analytic::branch_state_at_cycles(frame, p.init, rule.periods)
          : analytic::branch_state(frame, p.init, rule.t);
  return negativity::log_negativity_of_transpose(
      analytic::partial_transpose_matrix(st, p.dephasing).matrix());
}

fock::OracleConfig oracle_config(const ModelPoint& p, const OracleSettings& o) {
  fock::OracleConfig cfg;
  cfg.frame = o.frame;
  cfg.model = p.model;
  cfg.init = p.init;
  cfg.dephasing = p.dephasing;
  cfg.tail_threshold = o.tail_threshold;
  cfg.tolerance = o.tolerance;
  cfg.n_start = o.n_start;
  cfg.n_max = o.n_max;
  return cfg;
}

SweepCell evaluate_cell(const SweepSpec& spec, const std::vector<std::vector<double>>& values,
                        const std::vector<std::size_t>& idx) {
  SweepCell cell;
  ModelPoint p = spec.base;
  TimeRule rule = spec.time;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double v = values[k][idx[k]];
    cell.coords.push_back(v);
    apply_axis(spec.axes[k].param, v, p, rule);
  }
  cell.en = kNaN;
  cell.en_fock = kNaN;
  if (!(p.model.delta > 0.0)) {
    std::ostringstream os;
    os << "UnstableFrameCell: delta = " << p.model.delta << " <= 0";
    cell.valid = false;
    cell.error = os.str();
    return cell;
  }
  try {
    const units::SqueezedFrame frame = units::derive_squeezed_frame(p.model);
    cell.s = frame.s;
    cell.omega_s = frame.omega_s;
    cell.g_a_s = frame.g_a_s;
    cell.g_b_s = frame.g_b_s;
    cell.g_eff = frame.g_eff;
    cell.t = rule.time_for(frame);
    if (spec.backend != Backend::Fock) cell.en = analytic_en(frame, p, rule);
    if (spec.backend != Backend::Analytic) {
      const fock::OracleConfig cfg = oracle_config(p, spec.oracle);
      const std::vector<double> grid{cell.t};
      const auto conv = fock::converge_cutoff(cfg, grid);
      cell.cutoff = conv.cutoff;
      cell.en_fock = fock::oracle_en_series(cfg, conv.cutoff, grid).front();
    }
  } catch (const Error& e) {
    cell.valid = false;
    cell.error = std::string(error_code_name(e.code())) + ": " + e.what();
    return cell;
  }
  if (std::isfinite(cell.en) && cell.en < spec.en_clamp) cell.en = 0.0;
  if (std::isfinite(cell.en_fock) && cell.en_fock < spec.en_clamp) cell.en_fock = 0.0;
  const double v = cell.value();
  if (!std::isfinite(v) || v < 0.0) {
    cell.valid = false;
    cell.error = "InvalidArgument: non-finite entanglement value";
  }
  return cell;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepResult result;
  result.spec = spec;
  result.shape = spec.shape();
  for (const auto& a : spec.axes) result.axis_values.push_back(a.grid());
  result.provenance.code_version = GIE_VERSION_STRING;

  std::size_t total = 1;
  for (auto n : result.shape) total *= n;
  result.cells.resize(total);
  parallel_for(total, threads, [&](std::size_t i) {
    result.cells[i] = evaluate_cell(spec, result.axis_values, unflatten(i, result.shape));
  });
  for (const auto& c : result.cells) result.invalid_cells += c.valid ? 0 : 1;
  return result;
}

std::vector<double> finite_difference(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
  if (x.size() < 3) {
    throw Error(ErrorCode::InsufficientPoints, "rate needs at least 3 points on the g axis");
  }
  const std::size_t n = x.size();
  std::vector<double> d(n);
  d[0] = (y[1] - y[0]) / (x[1] - x[0]);
  d[n - 1] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]);
  return d;
}

std::vector<ZeroCrossing> zero_crossings(const std::vector<double>& x,
                                         const std::vector<double>& y) {
  // Sign changes between consecutive non-zero samples; a run of exact zeros
  // in between places the crossing at the middle of the run.
  std::vector<ZeroCrossing> out;
  std::size_t last = y.size();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      last = y.size();
      continue;
    }
    if (y[i] == 0.0) continue;
    if (last < y.size() && (y[last] < 0.0) != (y[i] < 0.0)) {
      const double a = y[last];
      const double g = i == last + 1 ? x[last] + (x[i] - x[last]) * a / (a - y[i])
                                     : 0.5 * (x[last + 1] + x[i - 1]);
      out.push_back({g, a < 0.0 ? 1 : -1});
    }
    last = i;
  }
  return out;
}

RateResult entanglement_rate(const SweepSpec& spec, RateVariable which, unsigned threads) {
  const AxisParam wanted = which == RateVariable::GA ? AxisParam::GA : AxisParam::GB;
  std::size_t axis = spec.axes.size();
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    if (spec.axes[k].param == wanted) axis = k;
  }
  if (axis == spec.axes.size()) {
    throw Error(ErrorCode::InvalidAxis,
                std::string("rate needs a ") + axis_param_name(wanted) + " axis");
  }
  const auto& g_axis = spec.axes[axis];
  const std::size_t points = g_axis.scale == AxisScale::List ? g_axis.values.size() : g_axis.count;
  if (points < 3) {
    throw Error(ErrorCode::InsufficientPoints, "rate needs at least 3 points on the g axis");
  }

  RateResult out;
  out.variable = which;
  out.axis = axis;
  out.sweep = run_sweep(spec, threads);
  const auto& shape = out.sweep.shape;

  std::vector<std::size_t> other_shape;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (k != axis) other_shape.push_back(shape[k]);
  }
  std::size_t lines = 1;
  for (auto n : other_shape) lines *= n;

  for (std::size_t l = 0; l < lines; ++l) {
    const auto other = other_shape.empty() ? std::vector<std::size_t>{} : unflatten(l, other_shape);
    RateLine line;
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t k = 0, o = 0; k < shape.size(); ++k) {
      if (k == axis) continue;
      idx[k] = other[o++];
      line.fixed.push_back(out.sweep.axis_values[k][idx[k]]);
    }
    for (std::size_t i = 0; i < shape[axis]; ++i) {
      idx[axis] = i;
      const SweepCell& c = out.sweep.at(idx);
      line.g.push_back(out.sweep.axis_values[axis][i]);
      line.en.push_back(c.valid ? c.value() : kNaN);
    }
    line.eta = finite_difference(line.g, line.en);
    line.zeros = zero_crossings(line.g, line.eta);
    out.lines.push_back(std::move(line));
  }
  return out;
}

void TimeseriesSpec::validate() const {
  if (variants.empty()) throw Error(ErrorCode::InvalidArgument, "time series needs a variant");
  if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "times must be >= 0");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be non-decreasing");
    }
  }
  if (cutoff && *cutoff < 2) throw Error(ErrorCode::CutoffTooSmall, "fixed cutoff must be >= 2");
}

TimeseriesTable timeseries_figure(const TimeseriesSpec& spec, unsigned threads) {
  spec.validate();
  TimeseriesTable table;
  table.spec = spec;
  table.provenance.code_version = GIE_VERSION_STRING;
  for (const auto& v : spec.variants) {
    SeriesColumns col;
    col.label = v.label;
    col.frame = units::derive_squeezed_frame(v.point.model);
    if (spec.backend != Backend::Fock) {
      for (const auto& tp : analytic::en_timeseries(col.frame, v.point.init, spec.t_grid,
                                                    v.point.dephasing)) {
        col.analytic.push_back(tp.en < spec.en_clamp ? 0.0 : tp.en);
      }
    }
    if (spec.backend != Backend::Analytic) {
      const fock::OracleConfig cfg = oracle_config(v.point, spec.oracle);
      const std::size_t n = spec.cutoff ? *spec.cutoff : fock::converge_cutoff(cfg, spec.t_grid).cutoff;
      fock::OracleSeries series = fock::oracle_cut_series(cfg, n, spec.t_grid, threads);
      for (auto& e : series.en) {
        for (double* v : {&e.tp_qubit, &e.tp_mediator, &e.qubit_mediator}) {
          if (*v < spec.en_clamp) *v = 0.0;
        }
      }
      col.oracle = std::move(series.en);
      col.cutoff = series.cutoff;
      col.tail = series.tail;
    }
    table.series.push_back(std::move(col));
  }
  return table;
}

std::vector<double> linspace(double t0, double t1, std::size_t count) {
  if (count < 2) throw Error(ErrorCode::InvalidArgument, "linspace needs count >= 2");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = t0 + (t1 - t0) * double(i) / double(count - 1);
  g.back() = t1;
  return g;
}

}  // namespace gie::sweep
