#include "gie/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "gie/errors.hpp"
#include "gie/negativity.hpp"
#include "gie/output.hpp"
#include "gie/sweep.hpp"
#include "gie/validate.hpp"

namespace gie::io {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string gamma_key(double g) {
  std::string s = short_number(g);
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
    if (c == '+') c = '_';
  }
  return "en_t_gamma_" + s;
}

double en_with_dephasing(const units::SqueezedFrame& frame, const analytic::MediatorInit& init,
                         int n, double gamma) {
  const analytic::BranchState st = analytic::branch_state_at_cycles(frame, init, n);
  return negativity::log_negativity_of_transpose(
      analytic::partial_transpose_matrix(st, {gamma, 0.0}).matrix());
}

void finish(CommandResult& res, OutputSink& sink, const RunConfig& cfg) {
  sink.write_json("config.json", nlohmann::json::parse(serialize_config(cfg)));
  res.files = sink.written();
  res.report["config_hash"] = sink.config_hash();
  res.report["files"] = res.files;
}

std::string label_suffix(const std::string& label) { return label.empty() ? "" : "[" + label + "]"; }

}  // namespace

std::vector<FeasibilityRow> feasibility_rows(const RunConfig& cfg) {
  const units::ModelParams mp = base_model(cfg);
  const units::SqueezedFrame frame = units::derive_squeezed_frame(mp);
  const UnitLabels u = unit_labels(cfg);
  const int n = cfg.feasibility.decoupling_index;
  const double t_n = frame.decoupling_time(n);

  std::vector<FeasibilityRow> rows{
      {"g_a_abs", "|g_a|", u.rate, std::fabs(mp.g_a)},
      {"g_b", "g_b", u.rate, mp.g_b},
      {"F", "F", u.rate, mp.F()},
      {"delta", "delta", u.rate, mp.delta},
      {"omega_tilde", "omega_tilde", u.rate, mp.omega_tilde},
      {"epsilon", "epsilon", u.rate, mp.epsilon},
      {"s", "s", "1", frame.s},
      {"omega_s", "omega_s", u.rate, frame.omega_s},
      {"g_a_s", "|g_a^s|", u.rate, std::fabs(frame.g_a_s)},
      {"g_b_s", "g_b^s", u.rate, frame.g_b_s},
      {"g_eff", "|g_eff|", u.rate, std::fabs(frame.g_eff)},
      {"t_n", "t_" + std::to_string(n), u.time, t_n},
  };
  if (cfg.si) {
    const units::RegimeReport rep = units::regime_report(*cfg.si, frame);
    rows.push_back({"delta_x", "Delta x", u.length, rep.delta_x});
  }
  rows.push_back({"en_t_closed_form", "EN(t_n) closed form", "ebit",
                  analytic::en_at_decoupling(frame.g_eff, t_n)});
  rows.push_back({"en_t_gamma0", "EN(t_n), gamma = 0", "ebit",
                  en_with_dephasing(frame, cfg.mediator, n, 0.0)});
  for (double g : cfg.feasibility.gamma_values) {
    rows.push_back({gamma_key(g), "EN(t_n), gamma = " + short_number(g), "ebit",
                    en_with_dephasing(frame, cfg.mediator, n, g)});
  }
  rows.push_back({"en_t_config_gamma", "EN(t_n), gamma = " + short_number(cfg.dephasing.qubit),
                  "ebit", en_with_dephasing(frame, cfg.mediator, n, cfg.dephasing.qubit)});
  return rows;
}

CommandResult cmd_feasibility(const RunConfig& cfg, const CommandOptions& opt) {
  CommandResult res;
  OutputSink sink(opt.out_dir, cfg);
  std::vector<std::string> warnings;
  if (cfg.si) warnings = cfg.si->validate();
  const std::vector<FeasibilityRow> rows = feasibility_rows(cfg);

  const bool golden = opt.golden;
  if (golden && !cfg.golden) throw ConfigError("golden", "--golden needs a golden block in the config");

  Table table;
  table.columns = {"quantity", "unit", "value"};
  if (golden) table.columns.insert(table.columns.end(), {"golden", "deviation", "tolerance", "status"});
  json rows_json = json::array();
  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof line, "%-26s %-12s %-24s", "quantity", "unit", "value");
  text << line;
  if (golden) text << " golden                   deviation   status";
  text << '\n';

  bool all_pass = true;
  for (const auto& r : rows) {
    json jr = {{"key", r.key}, {"label", r.label}, {"unit", r.unit}, {"value", r.value}};
    std::vector<std::string> row{r.key, r.unit, format_number(r.value)};
    std::snprintf(line, sizeof line, "%-26s %-12s %-24.10g", r.label.c_str(), r.unit.c_str(), r.value);
    text << line;
    if (golden) {
      const auto it = cfg.golden->values.find(r.key);
      if (it == cfg.golden->values.end()) {
        row.insert(row.end(), {"", "", "", ""});
      } else {
        const bool absolute = r.key.rfind("en_", 0) == 0;
        const double ref = it->second;
        const double dev = absolute ? std::fabs(r.value - ref)
                                    : std::fabs(r.value - ref) / std::max(std::fabs(ref), 1e-300);
        const double tol = absolute ? cfg.golden->en_abs_tol : cfg.golden->rel_tol;
        const bool pass = dev <= tol;
        all_pass = all_pass && pass;
        row.insert(row.end(), {format_number(ref), format_number(dev), format_number(tol),
                               pass ? "PASS" : "FAIL"});
        jr["golden"] = ref;
        jr["deviation"] = dev;
        jr["deviation_kind"] = absolute ? "absolute" : "relative";
        jr["tolerance"] = tol;
        jr["status"] = pass ? "PASS" : "FAIL";
        std::snprintf(line, sizeof line, " %-24.10g %-11.3e %s", ref, dev, pass ? "PASS" : "FAIL");
        text << line;
      }
    }
    text << '\n';
    table.add_row(std::move(row));
    rows_json.push_back(jr);
  }
  if (golden) {
    for (const auto& [key, v] : cfg.golden->values) {
      bool found = false;
      for (const auto& r : rows) found = found || r.key == key;
      if (!found) {
        all_pass = false;
        text << "golden key '" << key << "' has no matching row: FAIL\n";
      }
    }
  }

  json regime = json::object();
  if (cfg.si) {
    const units::RegimeReport rep =
        units::regime_report(*cfg.si, units::derive_squeezed_frame(base_model(cfg)));
    json checks = json::array();
    text << "\nregime checks\n";
    for (const auto& c : rep.checks) {
      checks.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"value", c.value},
                        {"limit", c.limit},
                        {"upper_bound", c.upper_bound},
                        {"margin", c.margin}});
      std::snprintf(line, sizeof line, "  %-36s %-14.6g %s %-12.6g %s\n", c.name.c_str(), c.value,
                    c.upper_bound ? "<" : ">", c.limit, c.passed ? "ok" : "VIOLATED");
      text << line;
    }
    for (const auto& n : rep.notes) text << "  note: " << n << '\n';
    regime = {{"delta_x", rep.delta_x}, {"checks", checks}, {"notes", rep.notes},
              {"all_passed", rep.all_passed()}};
  }
  for (const auto& w : warnings) text << "warning: " << w << '\n';
  if (golden) text << (all_pass ? "golden comparison: PASS\n" : "golden comparison: FAIL\n");

  res.report = {{"command", "feasibility"}, {"rows", rows_json}, {"regime", regime},
                {"warnings", warnings}};
  if (golden) res.report["golden_passed"] = all_pass;
  sink.write_csv("feasibility.csv", table);
  sink.write_json("feasibility.json", res.report);
  finish(res, sink, cfg);
  res.text = text.str();
  res.exit_code = golden && !all_pass ? 1 : 0;
  return res;
}

CommandResult cmd_dynamics(const RunConfig& cfg, const CommandOptions& opt) {
  CommandResult res;
  OutputSink sink(opt.out_dir, cfg);
  const sweep::TimeseriesSpec spec = timeseries_spec(cfg);
  const sweep::TimeseriesTable tab = sweep::timeseries_figure(spec, opt.threads);
  const UnitLabels u = unit_labels(cfg);

  Table table;
  table.columns.push_back("t [" + u.time + "]");
  const bool fock = spec.backend != sweep::Backend::Analytic;
  const bool closed = spec.backend != sweep::Backend::Fock;
  for (const auto& s : tab.series) {
    const std::string sfx = label_suffix(s.label);
    if (closed) table.columns.push_back("EN_tp_qubit_analytic" + sfx + " [ebit]");
    if (fock) {
      table.columns.push_back("EN_tp_qubit_fock" + sfx + " [ebit]");
      table.columns.push_back("EN_tp_mediator_fock" + sfx + " [ebit]");
      table.columns.push_back("EN_qubit_mediator_fock" + sfx + " [ebit]");
    }
  }
  json series = json::array();
  for (const auto& s : tab.series) {
    std::ostringstream c;
    c << "series " << s.label << ": s=" << format_number(s.frame.s)
      << " omega_s=" << format_number(s.frame.omega_s) << " g_eff=" << format_number(s.frame.g_eff);
    if (fock) c << " fock_cutoff=" << s.cutoff << " fock_tail=" << format_number(s.tail);
    table.comments.push_back(c.str());
    series.push_back({{"label", s.label},
                      {"s", s.frame.s},
                      {"omega_s", s.frame.omega_s},
                      {"g_a_s", s.frame.g_a_s},
                      {"g_b_s", s.frame.g_b_s},
                      {"g_eff", s.frame.g_eff},
                      {"t_period", s.frame.t_period},
                      {"cutoff", s.cutoff},
                      {"tail", s.tail},
                      {"analytic", s.analytic}});
    if (fock) {
      json tq = json::array(), tm = json::array(), qm = json::array();
      for (const auto& e : s.oracle) {
        tq.push_back(e.tp_qubit);
        tm.push_back(e.tp_mediator);
        qm.push_back(e.qubit_mediator);
      }
      series.back()["fock"] = {{"tp_qubit", tq}, {"tp_mediator", tm}, {"qubit_mediator", qm}};
    }
  }
  for (std::size_t i = 0; i < spec.t_grid.size(); ++i) {
    std::vector<std::string> row{format_number(spec.t_grid[i])};
    for (const auto& s : tab.series) {
      if (closed) row.push_back(format_number(s.analytic[i]));
      if (fock) {
        row.push_back(format_number(s.oracle[i].tp_qubit));
        row.push_back(format_number(s.oracle[i].tp_mediator));
        row.push_back(format_number(s.oracle[i].qubit_mediator));
      }
    }
    table.add_row(std::move(row));
  }

  res.report = {{"command", "dynamics"},
                {"backend", sweep::backend_name(spec.backend)},
                {"frame", fock::frame_name(spec.oracle.frame)},
                {"t", spec.t_grid},
                {"series", series}};
  sink.write_csv("dynamics.csv", table);
  sink.write_json("dynamics.json", res.report);
  if (cfg.gnuplot) {
    std::vector<int> cols;
    for (std::size_t c = 2; c <= table.columns.size(); ++c) cols.push_back(int(c));
    sink.write_text("dynamics.gp",
                    gnuplot_lines("dynamics.csv", cfg.name, table.columns, "t [" + u.time + "]", cols));
  }
  finish(res, sink, cfg);

  std::ostringstream text;
  text << "dynamics: " << tab.series.size() << " series x " << spec.t_grid.size() << " times ("
       << sweep::backend_name(spec.backend) << ")\n";
  for (const auto& s : tab.series) {
    double peak = 0.0;
    for (double v : s.analytic) peak = std::max(peak, v);
    for (const auto& e : s.oracle) peak = std::max(peak, e.tp_qubit);
    text << "  " << s.label << ": s = " << s.frame.s << ", max EN_tp_qubit = " << peak;
    if (fock) text << ", N = " << s.cutoff;
    text << '\n';
  }
  res.text = text.str();
  return res;
}

namespace {

json sweep_json(const sweep::SweepResult& r) {
  json axes = json::array();
  for (std::size_t k = 0; k < r.spec.axes.size(); ++k) {
    axes.push_back({{"param", sweep::axis_param_name(r.spec.axes[k].param)},
                    {"scale", sweep::axis_scale_name(r.spec.axes[k].scale)},
                    {"values", r.axis_values[k]}});
  }
  json cells = json::array();
  for (const auto& c : r.cells) {
    json jc = {{"coords", c.coords},      {"valid", c.valid},          {"en", finite_or_null(c.en)},
               {"en_fock", finite_or_null(c.en_fock)}, {"s", c.s},     {"omega_s", c.omega_s},
               {"g_a_s", c.g_a_s},        {"g_b_s", c.g_b_s},          {"g_eff", c.g_eff},        {"t", c.t},                  {"cutoff", c.cutoff}};
    if (!c.error.empty()) jc["error"] = c.error;
    cells.push_back(jc);
  }
  return {{"name", r.spec.name},
          {"axes", axes},
          {"shape", r.shape},
          {"backend", sweep::backend_name(r.spec.backend)},
          {"time_rule", r.spec.time.kind == sweep::TimeRule::Kind::Periods
                            ? json{{"periods", r.spec.time.periods}}
                            : json{{"t", r.spec.time.t}}},
          {"invalid_cells", r.invalid_cells},
          {"oracle",
           {{"frame", fock::frame_name(r.spec.oracle.frame)},
            {"tail_threshold", r.spec.oracle.tail_threshold},
            {"tolerance", r.spec.oracle.tolerance},
            {"n_max", r.spec.oracle.n_max}}},
          {"cells", cells}};
}

std::string axis_column(const sweep::SweepAxis& a, const UnitLabels& u) {
  switch (a.param) {
    case sweep::AxisParam::S:
    case sweep::AxisParam::Alpha0: return std::string(sweep::axis_param_name(a.param)) + " [1]";
    case sweep::AxisParam::T: return "t [" + u.time + "]";
    default: return std::string(sweep::axis_param_name(a.param)) + " [" + u.rate + "]";
  }
}

Table sweep_table(const sweep::SweepResult& r, const UnitLabels& u) {
  Table t;
  for (const auto& a : r.spec.axes) t.columns.push_back(axis_column(a, u));
  t.columns.insert(t.columns.end(),
                   {"EN [ebit]", "EN_fock [ebit]", "valid [bool]", "s [1]", "omega_s [" + u.rate + "]",
                    "g_a_s [" + u.rate + "]", "g_b_s [" + u.rate + "]", "g_eff [" + u.rate + "]",
                    "t [" + u.time + "]", "cutoff [levels]", "error"});
  t.comments.push_back(std::string("sweep ") + r.spec.name + " backend=" +
                       sweep::backend_name(r.spec.backend) +
                       " invalid_cells=" + std::to_string(r.invalid_cells));
  for (const auto& c : r.cells) {
    std::vector<std::string> row;
    for (double v : c.coords) row.push_back(format_number(v));
    row.insert(row.end(), {format_number(c.en), format_number(c.en_fock), c.valid ? "1" : "0",
                           format_number(c.s), format_number(c.omega_s), format_number(c.g_a_s),
                           format_number(c.g_b_s), format_number(c.g_eff),
                           format_number(c.t), std::to_string(c.cutoff), c.error});
    for (char& ch : row.back()) {
      if (ch == ',') ch = ';';
    }
    t.add_row(std::move(row));
  }
  return t;
}

std::string file_stem(const std::string& prefix, const std::string& name, std::size_t index) {
  std::string n = name.empty() ? std::to_string(index) : name;
  for (char& c : n) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return prefix + "_" + n;
}

}  // namespace

CommandResult cmd_sweep(const RunConfig& cfg, const CommandOptions& opt) {
  if (cfg.sweeps.empty()) throw ConfigError("sweeps", "mode sweep needs at least one sweep block");
  CommandResult res;
  OutputSink sink(opt.out_dir, cfg);
  const UnitLabels u = unit_labels(cfg);
  json results = json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < cfg.sweeps.size(); ++i) {
    const sweep::SweepSpec spec = sweep_spec(cfg, cfg.sweeps[i]);
    sweep::SweepResult r = sweep::run_sweep(spec, opt.threads);
    r.provenance.config_hash = sink.config_hash();
    const std::string stem = file_stem("sweep", spec.name, i);
    const Table table = sweep_table(r, u);
    sink.write_csv(stem + ".csv", table);
    json body = sweep_json(r);
    sink.write_json(stem + ".json", body);
    if (cfg.gnuplot) {
      const std::string title = cfg.name + " " + spec.name;
      const int z = int(spec.axes.size()) + 1;
      sink.write_text(stem + ".gp",
                      spec.axes.size() == 2
                          ? gnuplot_heatmap(stem + ".csv", title, table.columns[0], table.columns[1], z)
                          : gnuplot_lines(stem + ".csv", title, table.columns, table.columns[0], {z}));
    }
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& c : r.cells) {
      if (!c.valid) continue;
      lo = std::min(lo, c.value());
      hi = std::max(hi, c.value());
    }
    text << "sweep " << (spec.name.empty() ? std::to_string(i) : spec.name) << ": "
         << r.cells.size() << " cells, " << r.invalid_cells << " invalid, EN in [" << lo << ", "
         << hi << "]\n";
    results.push_back({{"name", spec.name},
                       {"cells", r.cells.size()},
                       {"invalid_cells", r.invalid_cells},
                       {"en_min", finite_or_null(lo)},
                       {"en_max", finite_or_null(hi)}});
  }
  res.report = {{"command", "sweep"}, {"sweeps", results}};
  finish(res, sink, cfg);
  res.text = text.str();
  return res;
}

CommandResult cmd_rate(const RunConfig& cfg, const CommandOptions& opt) {
  if (!cfg.rate) throw ConfigError("rate", "mode rate needs a rate block");
  CommandResult res;
  OutputSink sink(opt.out_dir, cfg);
  const UnitLabels u = unit_labels(cfg);
  const sweep::SweepSpec spec = sweep_spec(cfg, cfg.rate->sweep);
  const sweep::RateResult rr = sweep::entanglement_rate(spec, cfg.rate->variable, opt.threads);
  const std::string g_name = cfg.rate->variable == sweep::RateVariable::GA ? "g_a" : "g_b";

  Table table;
  std::vector<std::string> fixed_names;
  for (std::size_t k = 0; k < spec.axes.size(); ++k) {
    if (k != rr.axis) {
      fixed_names.push_back(axis_column(spec.axes[k], u));
      table.columns.push_back(fixed_names.back());
    }
  }
  table.columns.insert(table.columns.end(),
                       {g_name + " [" + u.rate + "]", "EN [ebit]", "eta [ebit/" + u.rate + "]"});
  json lines = json::array();
  std::ostringstream text;
  for (const auto& line : rr.lines) {
    json zeros = json::array();
    for (const auto& z : line.zeros) zeros.push_back({{"g", z.g}, {"direction", z.direction}});
    lines.push_back({{"fixed", line.fixed}, {"g", line.g}, {"en", line.en}, {"eta", line.eta},
                     {"zero_crossings", zeros}});
    std::ostringstream c;
    c << "line";
    for (std::size_t k = 0; k < line.fixed.size(); ++k) {
      c << ' ' << fixed_names[k] << '=' << format_number(line.fixed[k]);
    }
    c << " zero_crossings:";
    for (const auto& z : line.zeros) c << ' ' << format_number(z.g) << (z.direction > 0 ? "(+)" : "(-)");
    table.comments.push_back(c.str());
    text << c.str() << '\n';
    for (std::size_t i = 0; i < line.g.size(); ++i) {
      std::vector<std::string> row;
      for (double f : line.fixed) row.push_back(format_number(f));
      row.insert(row.end(), {format_number(line.g[i]), format_number(line.en[i]),
                             format_number(line.eta[i])});
      table.add_row(std::move(row));
    }
  }
  res.report = {{"command", "rate"}, {"variable", g_name}, {"lines", lines},
                {"sweep", sweep_json(rr.sweep)}};
  sink.write_csv("rate.csv", table);
  sink.write_json("rate.json", res.report);
  if (cfg.gnuplot) {
    const int gcol = int(fixed_names.size()) + 1;
    std::ostringstream gp;
    gp << "set datafile separator ','\nset datafile commentschars '#'\n"
       << "set xlabel '" << table.columns[std::size_t(gcol - 1)] << "'\n"
       << "set ylabel 'eta'\nset xzeroaxis\n"
       << "plot 'rate.csv' using " << gcol << ":" << gcol + 2 << " with points notitle\n";
    sink.write_text("rate.gp", gp.str());
  }
  finish(res, sink, cfg);
  res.text = text.str();
  return res;
}

CommandResult cmd_validate(const RunConfig& cfg, const CommandOptions& opt) {
  CommandResult res;
  OutputSink sink(opt.out_dir, cfg);
  const validation::ValidationReport rep = validation::run_validation(cfg, opt.threads);
  res.report = rep.to_json();
  res.report["command"] = "validate";
  sink.write_json("validate.json", res.report);
  finish(res, sink, cfg);
  std::ostringstream text;
  for (const auto& n : rep.notes) text << "note: " << n << '\n';
  char line[256];
  for (const auto& c : rep.checks) {
    std::snprintf(line, sizeof line, "%-8s %-22s max_dev=%-11.3e tol=%-9.2e samples=%zu\n",
                  validation::status_name(c.status), c.name.c_str(), c.max_deviation, c.tolerance,
                  c.samples);
    text << line;
    for (const auto& n : c.notes) text << "         " << n << '\n';
  }
  text << (rep.all_passed() ? "all checks passed\n" : "some checks failed\n");
  res.text = text.str();
  res.exit_code = rep.all_passed() ? 0 : 1;
  return res;
}

CommandResult run_command(Mode mode, const RunConfig& cfg, const CommandOptions& opt) {
  switch (mode) {
    case Mode::Feasibility: return cmd_feasibility(cfg, opt);
    case Mode::Dynamics: return cmd_dynamics(cfg, opt);
    case Mode::Sweep: return cmd_sweep(cfg, opt);
    case Mode::Rate: return cmd_rate(cfg, opt);
    case Mode::Validate: return cmd_validate(cfg, opt);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode");
}

}  // namespace gie::io
