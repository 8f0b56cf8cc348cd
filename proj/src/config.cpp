#include "gie/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gie/errors.hpp"
#include "json.hpp"

namespace gie::io {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown fields.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(at(key), "required number is missing");
    return as_number(j_.at(key), at(key));
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(at(key), "expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(as_number(v[i], at(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  cplx complex(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(at(key), "expected a number or [re, im]");
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
    return x;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class Fn>
auto rethrow_at(const std::string& path, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

Overrides read_overrides(Reader& r) {
  Overrides o;
  o.F = r.opt_number("F");
  o.delta = r.opt_number("delta");
  o.s = r.opt_number("s");
  o.g_a = r.opt_number("g_a");
  o.g_b = r.opt_number("g_b");
  o.gamma = r.opt_number("gamma");
  o.gamma_tp = r.opt_number("gamma_tp");
  o.epsilon = r.opt_number("epsilon");
  if (r.has("alpha0")) o.alpha0 = r.complex("alpha0");
  o.xi_mag = r.opt_number("xi_mag");
  o.theta = r.opt_number("theta");
  const int drives = int(o.F.has_value()) + int(o.delta.has_value()) + int(o.s.has_value());
  if (drives > 1) throw ConfigError(r.at("F"), "give at most one of F, delta, s");
  for (auto [name, v] : {std::pair{"gamma", o.gamma}, std::pair{"gamma_tp", o.gamma_tp}}) {
    if (v && *v < 0.0) throw ConfigError(r.at(name), "rates must be >= 0");
  }
  return o;
}

DimensionlessParams read_dimensionless(Reader r) {
  DimensionlessParams p;
  p.omega_tilde = r.number("omega_tilde", 1.0);
  if (!(p.omega_tilde > 0.0)) throw ConfigError(r.at("omega_tilde"), "must be > 0");
  p.g_a = r.number("g_a");
  p.g_b = r.number("g_b");
  p.F = r.opt_number("F");
  p.delta = r.opt_number("delta");
  if (p.F.has_value() == p.delta.has_value()) {
    throw ConfigError(r.at("F"), "exactly one of F and delta is required");
  }
  p.omega_a = r.number("omega_a", 0.0);
  p.omega_b = r.number("omega_b", 0.0);
  p.epsilon = r.number("epsilon", 0.0);
  r.finish();
  return p;
}

units::PhysicalSetup read_si(Reader r) {
  units::PhysicalSetup s;
  s.m_a = r.number("m_a");
  s.m_c = r.number("m_c");
  s.d = r.number("d");
  s.d0 = r.number("d0");
  s.omega_c = r.number("omega_c");
  s.omega_b = r.number("omega_b", 0.0);
  s.omega_a0 = r.number("omega_a0", 0.0);
  s.Q1 = r.opt_number("Q1");
  s.Q2 = r.opt_number("Q2");
  s.r0 = r.opt_number("r0");
  s.F = r.opt_number("F");
  s.delta = r.opt_number("delta");
  s.chi = r.opt_number("chi");
  s.B_grad = r.opt_number("B_grad");
  s.gamma_e = r.opt_number("gamma_e");
  s.r_a = r.number("r_a", 0.0);
  s.r_c = r.number("r_c", 0.0);
  if (s.F && s.delta) throw ConfigError(r.at("F"), "give at most one of F and delta");
  r.finish();
  const std::string path = r.at("");
  rethrow_at(path.substr(0, path.size() - 1), [&] { return s.validate(); });
  return s;
}

sweep::SweepAxis read_axis(Reader r) {
  sweep::SweepAxis a;
  const std::string param = r.text("param", "");
  a.param = rethrow_at(r.at("param"), [&] { return sweep::parse_axis_param(param); });
  a.scale = rethrow_at(r.at("scale"), [&] {
    return sweep::parse_axis_scale(r.text("scale", r.has("values") ? "list" : "linear"));
  });
  if (a.scale == sweep::AxisScale::List) {
    a.values = r.numbers("values");
    a.count = a.values.size();
  } else {
    a.min = r.number("min");
    a.max = r.number("max");
    a.count = r.count("count", 0);
  }
  r.finish();
  rethrow_at(r.at("count"), [&] {
    a.validate();
    return 0;
  });
  return a;
}

sweep::TimeRule read_time_rule(Reader r) {
  sweep::TimeRule t;
  if (r.has("t") && r.has("periods")) throw ConfigError(r.at("t"), "give t or periods, not both");
  if (r.has("t")) {
    t.kind = sweep::TimeRule::Kind::Fixed;
    t.t = r.number("t");
    if (t.t < 0.0) throw ConfigError(r.at("t"), "must be >= 0");
  } else {
    t.kind = sweep::TimeRule::Kind::Periods;
    t.periods = r.number("periods", 1.0);
    if (t.periods < 0.0) throw ConfigError(r.at("periods"), "must be >= 0");
  }
  r.finish();
  return t;
}

SweepBlock read_sweep_block(Reader r) {
  SweepBlock b;
  b.name = r.text("name", "");
  const json& axes = r.raw("axes");
  if (!axes.is_array() || axes.empty()) throw ConfigError(r.at("axes"), "expected a non-empty array");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    b.axes.push_back(read_axis(Reader(axes[i], r.at("axes") + "[" + std::to_string(i) + "]")));
  }
  if (r.has("time")) b.time = read_time_rule(Reader(r.raw("time"), r.at("time")));
  if (r.has("overrides")) {
    Reader o(r.raw("overrides"), r.at("overrides"));
    b.overrides = read_overrides(o);
    o.finish();
  }
  if (r.has("backend")) {
    const std::string name = r.text("backend", "");
    b.backend = rethrow_at(r.at("backend"), [&] { return sweep::parse_backend(name); });
  }
  r.finish();
  sweep::SweepSpec probe;
  probe.axes = b.axes;
  probe.time = b.time;
  rethrow_at(r.at("axes"), [&] {
    probe.validate();
    return 0;
  });
  return b;
}

DynamicsBlock read_dynamics(Reader r) {
  DynamicsBlock d;
  d.t_min = r.number("t_min", 0.0);
  d.t_max = r.number("t_max");
  d.t_count = r.count("t_count", 0);
  const std::string unit = r.text("t_unit", "absolute");
  if (unit == "absolute") {
    d.unit = TimeUnit::Absolute;
  } else if (unit == "periods") {
    d.unit = TimeUnit::Periods;
  } else {
    throw ConfigError(r.at("t_unit"), "expected 'absolute' or 'periods'");
  }
  if (d.t_count == 0) throw ConfigError(r.at("t_count"), "time grid is empty");
  if (d.t_min < 0.0) throw ConfigError(r.at("t_min"), "must be >= 0");
  if (d.t_max < d.t_min) throw ConfigError(r.at("t_max"), "must be >= t_min");
  if (d.t_count == 1 && d.t_max != d.t_min) {
    throw ConfigError(r.at("t_count"), "a single point needs t_max == t_min");
  }
  if (r.has("variants")) {
    const json& vs = r.raw("variants");
    if (!vs.is_array()) throw ConfigError(r.at("variants"), "expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Reader v(vs[i], r.at("variants") + "[" + std::to_string(i) + "]");
      Variant var;
      var.label = v.text("label", "curve" + std::to_string(i));
      var.overrides = read_overrides(v);
      v.finish();
      d.variants.push_back(std::move(var));
    }
  }
  r.finish();
  return d;
}

json overrides_json(const Overrides& o) {
  json j = json::object();
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = *v;
  };
  put("F", o.F);
  put("delta", o.delta);
  put("s", o.s);
  put("g_a", o.g_a);
  put("g_b", o.g_b);
  put("gamma", o.gamma);
  put("gamma_tp", o.gamma_tp);
  put("epsilon", o.epsilon);
  if (o.alpha0) j["alpha0"] = {o.alpha0->real(), o.alpha0->imag()};
  put("xi_mag", o.xi_mag);
  put("theta", o.theta);
  return j;
}

json sweep_block_json(const SweepBlock& b) {
  json j;
  j["name"] = b.name;
  json axes = json::array();
  for (const auto& a : b.axes) {
    json ja;
    ja["param"] = sweep::axis_param_name(a.param);
    ja["scale"] = sweep::axis_scale_name(a.scale);
    if (a.scale == sweep::AxisScale::List) {
      ja["values"] = a.values;
    } else {
      ja["min"] = a.min;
      ja["max"] = a.max;
      ja["count"] = a.count;
    }
    axes.push_back(ja);
  }
  j["axes"] = axes;
  if (b.time.kind == sweep::TimeRule::Kind::Fixed) {
    j["time"] = {{"t", b.time.t}};
  } else {
    j["time"] = {{"periods", b.time.periods}};
  }
  j["overrides"] = overrides_json(b.overrides);
  if (b.backend) j["backend"] = sweep::backend_name(*b.backend);
  return j;
}

json config_json(const RunConfig& c) {
  json j;
  j["name"] = c.name;
  j["description"] = c.description;
  j["mode"] = mode_name(c.mode);
  json params;
  if (c.dimensionless) {
    const auto& d = *c.dimensionless;
    json p = {{"omega_tilde", d.omega_tilde}, {"g_a", d.g_a},         {"g_b", d.g_b},
              {"omega_a", d.omega_a},         {"omega_b", d.omega_b}, {"epsilon", d.epsilon}};
    if (d.F) p["F"] = *d.F;
    if (d.delta) p["delta"] = *d.delta;
    params["dimensionless"] = p;
  }
  if (c.si) {
    const auto& s = *c.si;
    json p = {{"m_a", s.m_a},          {"m_c", s.m_c},         {"d", s.d},
              {"d0", s.d0},            {"omega_c", s.omega_c}, {"omega_b", s.omega_b},
              {"omega_a0", s.omega_a0}, {"r_a", s.r_a},         {"r_c", s.r_c}};
    auto put = [&](const char* k, const std::optional<double>& v) {
      if (v) p[k] = *v;
    };
    put("Q1", s.Q1);
    put("Q2", s.Q2);
    put("r0", s.r0);
    put("F", s.F);
    put("delta", s.delta);
    put("chi", s.chi);
    put("B_grad", s.B_grad);
    put("gamma_e", s.gamma_e);
    params["si"] = p;
  }
  j["parameters"] = params;
  json med = {{"alpha0", {c.mediator.alpha0.real(), c.mediator.alpha0.imag()}},
              {"theta", c.mediator.theta}};
  if (c.mediator.xi_mag) med["xi_mag"] = *c.mediator.xi_mag;
  j["mediator"] = med;
  j["dephasing"] = {{"gamma", c.dephasing.qubit}, {"gamma_tp", c.dephasing.tp}};
  j["backend"] = sweep::backend_name(c.backend);
  json oracle = {{"frame", fock::frame_name(c.frame)}};
  if (c.cutoff) oracle["cutoff"] = *c.cutoff;
  j["oracle"] = oracle;
  if (c.dynamics) {
    const auto& d = *c.dynamics;
    json jd = {{"t_min", d.t_min},
               {"t_max", d.t_max},
               {"t_count", d.t_count},
               {"t_unit", d.unit == TimeUnit::Periods ? "periods" : "absolute"}};
    json vs = json::array();
    for (const auto& v : d.variants) {
      json jv = overrides_json(v.overrides);
      jv["label"] = v.label;
      vs.push_back(jv);
    }
    jd["variants"] = vs;
    j["dynamics"] = jd;
  }
  json sweeps = json::array();
  for (const auto& b : c.sweeps) sweeps.push_back(sweep_block_json(b));
  j["sweeps"] = sweeps;
  if (c.rate) {
    j["rate"] = {{"variable", c.rate->variable == sweep::RateVariable::GA ? "g_a" : "g_b"},
                 {"sweep", sweep_block_json(c.rate->sweep)}};
  }
  json val = {{"seed", c.validate.seed},
              {"overlap_samples", c.validate.overlap_samples},
              {"pt_samples", c.validate.pt_samples},
              {"timeseries_points", c.validate.timeseries_points},
              {"max_pt_squeezing", c.validate.max_pt_squeezing},
              {"frame", fock::frame_name(c.validate.frame)}};
  if (c.validate.negative_control) val["negative_control"] = *c.validate.negative_control;
  j["validate"] = val;
  j["feasibility"] = {{"gamma_values", c.feasibility.gamma_values},
                      {"decoupling_index", c.feasibility.decoupling_index}};
  j["tolerances"] = {{"fock_tail", c.tolerances.fock_tail},
                     {"convergence", c.tolerances.convergence},
                     {"en_clamp", c.tolerances.en_clamp},
                     {"n_start", c.tolerances.n_start},
                     {"n_max", c.tolerances.n_max}};
  if (c.golden) {
    j["golden"] = {{"rel_tol", c.golden->rel_tol},
                   {"en_abs_tol", c.golden->en_abs_tol},
                   {"values", c.golden->values}};
  }
  j["threads"] = c.threads;
  j["output"] = {{"gnuplot", c.gnuplot}};
  return j;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Feasibility: return "feasibility";
    case Mode::Dynamics: return "dynamics";
    case Mode::Sweep: return "sweep";
    case Mode::Rate: return "rate";
    case Mode::Validate: return "validate";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::Feasibility, Mode::Dynamics, Mode::Sweep, Mode::Rate, Mode::Validate}) {
    if (name == mode_name(m)) return m;
  }
  throw ConfigError("mode", "unknown mode '" + name + "'");
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  Reader r(root, "");
  RunConfig c;
  r.has("provenance");  // written into emitted configs; ignored on input
  c.name = r.text("name", "");
  c.description = r.text("description", "");
  c.mode = parse_mode(r.text("mode", "dynamics"));

  if (!r.has("parameters")) throw ConfigError("parameters", "required block is missing");
  {
    Reader p(r.raw("parameters"), "parameters");
    const bool dl = p.has("dimensionless");
    const bool si = p.has("si");
    if (dl == si) throw ConfigError("parameters", "exactly one of 'dimensionless' and 'si' is required");
    if (dl) c.dimensionless = read_dimensionless(Reader(p.raw("dimensionless"), "parameters.dimensionless"));
    if (si) c.si = read_si(Reader(p.raw("si"), "parameters.si"));
    p.finish();
  }
  if (r.has("mediator")) {
    Reader m(r.raw("mediator"), "mediator");
    if (m.has("alpha0")) c.mediator.alpha0 = m.complex("alpha0");
    c.mediator.xi_mag = m.opt_number("xi_mag");
    c.mediator.theta = m.number("theta", c.mediator.theta);
    if (c.mediator.xi_mag && *c.mediator.xi_mag < 0.0) throw ConfigError("mediator.xi_mag", "must be >= 0");
    m.finish();
  }
  if (r.has("dephasing")) {
    Reader d(r.raw("dephasing"), "dephasing");
    c.dephasing.qubit = d.number("gamma", 0.0);
    c.dephasing.tp = d.number("gamma_tp", 0.0);
    if (c.dephasing.qubit < 0.0) throw ConfigError("dephasing.gamma", "must be >= 0");
    if (c.dephasing.tp < 0.0) throw ConfigError("dephasing.gamma_tp", "must be >= 0");
    d.finish();
  }
  if (r.has("backend")) {
    const std::string b = r.text("backend", "");
    c.backend = rethrow_at("backend", [&] { return sweep::parse_backend(b); });
  }
  if (r.has("oracle")) {
    Reader o(r.raw("oracle"), "oracle");
    const std::string f = o.text("frame", "squeezed");
    c.frame = rethrow_at("oracle.frame", [&] { return fock::parse_frame(f); });
    if (o.has("cutoff")) {
      c.cutoff = o.count("cutoff", 0);
      if (*c.cutoff < 2) throw ConfigError("oracle.cutoff", "must be >= 2");
    }
    o.finish();
  }
  if (r.has("dynamics")) c.dynamics = read_dynamics(Reader(r.raw("dynamics"), "dynamics"));
  if (r.has("sweeps")) {
    const json& s = r.raw("sweeps");
    if (!s.is_array()) throw ConfigError("sweeps", "expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      c.sweeps.push_back(read_sweep_block(Reader(s[i], "sweeps[" + std::to_string(i) + "]")));
    }
  }
  if (r.has("rate")) {
    Reader rr(r.raw("rate"), "rate");
    RateBlock rb;
    const std::string v = rr.text("variable", "g_b");
    if (v == "g_a") {
      rb.variable = sweep::RateVariable::GA;
    } else if (v == "g_b") {
      rb.variable = sweep::RateVariable::GB;
    } else {
      throw ConfigError("rate.variable", "expected 'g_a' or 'g_b'");
    }
    if (!rr.has("sweep")) throw ConfigError("rate.sweep", "required block is missing");
    rb.sweep = read_sweep_block(Reader(rr.raw("sweep"), "rate.sweep"));
    rr.finish();
    c.rate = std::move(rb);
  }
  if (r.has("validate")) {
    Reader v(r.raw("validate"), "validate");
    c.validate.seed = static_cast<unsigned>(v.count("seed", c.validate.seed));
    c.validate.overlap_samples = v.count("overlap_samples", c.validate.overlap_samples);
    c.validate.pt_samples = v.count("pt_samples", c.validate.pt_samples);
    c.validate.timeseries_points = v.count("timeseries_points", c.validate.timeseries_points);
    c.validate.max_pt_squeezing = v.number("max_pt_squeezing", c.validate.max_pt_squeezing);
    const std::string f = v.text("frame", "squeezed");
    c.validate.frame = rethrow_at("validate.frame", [&] { return fock::parse_frame(f); });
    if (v.has("negative_control")) {
      const std::string n = v.text("negative_control", "");
      if (n != "flip_overlap_phase") {
        throw ConfigError("validate.negative_control", "only 'flip_overlap_phase' is supported");
      }
      c.validate.negative_control = n;
    }
    if (c.validate.timeseries_points < 2) {
      throw ConfigError("validate.timeseries_points", "must be >= 2");
    }
    v.finish();
  }
  if (r.has("feasibility")) {
    Reader f(r.raw("feasibility"), "feasibility");
    if (f.has("gamma_values")) c.feasibility.gamma_values = f.numbers("gamma_values");
    c.feasibility.decoupling_index =
        static_cast<int>(f.count("decoupling_index", std::size_t(c.feasibility.decoupling_index)));
    if (c.feasibility.decoupling_index < 1) {
      throw ConfigError("feasibility.decoupling_index", "must be >= 1");
    }
    f.finish();
  }
  if (r.has("tolerances")) {
    Reader t(r.raw("tolerances"), "tolerances");
    c.tolerances.fock_tail = t.number("fock_tail", c.tolerances.fock_tail);
    c.tolerances.convergence = t.number("convergence", c.tolerances.convergence);
    c.tolerances.en_clamp = t.number("en_clamp", c.tolerances.en_clamp);
    c.tolerances.n_start = t.count("n_start", c.tolerances.n_start);
    c.tolerances.n_max = t.count("n_max", c.tolerances.n_max);
    for (const char* k : {"fock_tail", "convergence", "en_clamp"}) {
      if (t.has(k) && !(t.number(k) > 0.0)) throw ConfigError(t.at(k), "must be > 0");
    }
    if (c.tolerances.n_start < 2) throw ConfigError("tolerances.n_start", "must be >= 2");
    if (c.tolerances.n_max < c.tolerances.n_start) {
      throw ConfigError("tolerances.n_max", "must be >= n_start");
    }
    t.finish();
  }
  if (r.has("golden")) {
    Reader g(r.raw("golden"), "golden");
    GoldenBlock gb;
    gb.rel_tol = g.number("rel_tol", gb.rel_tol);
    gb.en_abs_tol = g.number("en_abs_tol", gb.en_abs_tol);
    if (g.has("values")) {
      Reader vals(g.raw("values"), "golden.values");
      for (auto it = g.raw("values").begin(); it != g.raw("values").end(); ++it) {
        gb.values[it.key()] = vals.number(it.key());
      }
      vals.finish();
    }
    g.finish();
    c.golden = std::move(gb);
  }
  if (r.has("threads")) {
    c.threads = static_cast<unsigned>(r.count("threads", 1));
    if (c.threads == 0) throw ConfigError("threads", "must be >= 1");
  }
  if (r.has("output")) {
    Reader o(r.raw("output"), "output");
    c.gnuplot = o.flag("gnuplot", false);
    o.finish();
  }
  r.finish();
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

RunConfig load_preset(const std::string& name) {
  for (const auto& [key, text] : preset_table()) {
    if (key == name) return parse_config(text);
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("preset", "unknown preset '" + name + "' (available: " + known + ")");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& entry : preset_table()) names.emplace_back(entry.first);
  return names;
}

std::string serialize_config(const RunConfig& cfg, int indent) {
  return config_json(cfg).dump(indent);
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

units::ModelParams base_model(const RunConfig& cfg) {
  if (cfg.si) return rethrow_at("parameters.si", [&] { return units::derive_model_params(*cfg.si); });
  if (!cfg.dimensionless) throw ConfigError("parameters", "no parameter block");
  const auto& d = *cfg.dimensionless;
  units::ModelParams mp;
  mp.omega_tilde = d.omega_tilde;
  mp.omega_a = d.omega_a;
  mp.omega_b = d.omega_b;
  mp.epsilon = d.epsilon;
  mp.g_a = d.g_a;
  mp.g_b = d.g_b;
  if (d.delta) {
    mp.delta = *d.delta;
  } else {
    mp.set_F(*d.F);
  }
  return mp;
}

sweep::ModelPoint model_point(const RunConfig& cfg, const Overrides& ov) {
  sweep::ModelPoint p;
  p.model = base_model(cfg);
  p.dephasing = cfg.dephasing;
  p.init = cfg.mediator;
  if (ov.F) p.model.set_F(*ov.F);
  if (ov.delta) p.model.delta = *ov.delta;
  if (ov.s) p.model.delta = p.model.omega_tilde * std::exp(-4.0 * *ov.s);
  if (ov.g_a) p.model.g_a = *ov.g_a;
  if (ov.g_b) p.model.g_b = *ov.g_b;
  if (ov.epsilon) p.model.epsilon = *ov.epsilon;
  if (ov.gamma) p.dephasing.qubit = *ov.gamma;
  if (ov.gamma_tp) p.dephasing.tp = *ov.gamma_tp;
  if (ov.alpha0) p.init.alpha0 = *ov.alpha0;
  if (ov.xi_mag) p.init.xi_mag = *ov.xi_mag;
  if (ov.theta) p.init.theta = *ov.theta;
  return p;
}

sweep::OracleSettings oracle_settings(const RunConfig& cfg) {
  sweep::OracleSettings o;
  o.frame = cfg.frame;
  o.tail_threshold = cfg.tolerances.fock_tail;
  o.tolerance = cfg.tolerances.convergence;
  o.n_start = cfg.tolerances.n_start;
  o.n_max = cfg.tolerances.n_max;
  return o;
}

sweep::SweepSpec sweep_spec(const RunConfig& cfg, const SweepBlock& block) {
  sweep::SweepSpec s;
  s.name = block.name;
  s.axes = block.axes;
  s.base = model_point(cfg, block.overrides);
  s.time = block.time;
  s.backend = block.backend.value_or(cfg.backend);
  s.oracle = oracle_settings(cfg);
  s.en_clamp = cfg.tolerances.en_clamp;
  return s;
}

sweep::TimeseriesSpec timeseries_spec(const RunConfig& cfg) {
  if (!cfg.dynamics) throw ConfigError("dynamics", "required block is missing");
  const DynamicsBlock& d = *cfg.dynamics;
  sweep::TimeseriesSpec ts;
  ts.name = cfg.name;
  ts.backend = cfg.backend;
  ts.oracle = oracle_settings(cfg);
  ts.cutoff = cfg.cutoff;
  ts.en_clamp = cfg.tolerances.en_clamp;
  if (d.variants.empty()) {
    ts.variants.push_back({"base", model_point(cfg)});
  } else {
    for (const auto& v : d.variants) ts.variants.push_back({v.label, model_point(cfg, v.overrides)});
  }
  double scale = 1.0;
  if (d.unit == TimeUnit::Periods) {
    scale = rethrow_at("dynamics.t_unit", [&] {
      return units::derive_squeezed_frame(ts.variants.front().point.model).t_period;
    });
  }
  ts.t_grid = d.t_count == 1 ? std::vector<double>{d.t_min * scale}
                             : sweep::linspace(d.t_min * scale, d.t_max * scale, d.t_count);
  return ts;
}

}  // namespace gie::io
