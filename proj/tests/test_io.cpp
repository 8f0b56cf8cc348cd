#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gie/commands.hpp"
#include "gie/config.hpp"
#include "gie/errors.hpp"
#include "gie/output.hpp"
#include "gie/validate.hpp"
#include "json.hpp"

using namespace gie;
using namespace gie::io;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "name": "unit",
  "mode": "sweep",
  "parameters": {"dimensionless": {"g_a": 0.0208333, "g_b": 1.0, "F": 0.0}},
  "sweeps": [{"name": "F", "axes": [{"param": "F", "min": 0.0, "max": 0.2, "count": 5}]}]
})";

std::string config_error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gie_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("every preset parses and round-trips") {
  const auto names = preset_names();
  for (const char* expected :
       {"fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "sec5-feasibility"}) {
    CHECK(std::find(names.begin(), names.end(), expected) != names.end());
  }
  for (const auto& name : names) {
    CAPTURE(name);
    const RunConfig cfg = load_preset(name);
    const RunConfig again = parse_config(serialize_config(cfg));
    CHECK(again == cfg);
    CHECK(config_hash(again) == config_hash(cfg));
  }
  CHECK_THROWS_AS(load_preset("nope"), Error);
}

TEST_CASE("config hash is a stable 16-digit digest of the content") {
  const RunConfig a = parse_config(kMinimal);
  const std::string h = config_hash(a);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  RunConfig b = a;
  b.dimensionless->g_b = 0.9;
  CHECK(config_hash(b) != h);
  // Key order and whitespace in the input do not matter.
  json j = json::parse(kMinimal);
  CHECK(config_hash(parse_config(j.dump())) == h);
}

TEST_CASE("strict parsing reports the JSON path") {
  json j = json::parse(kMinimal);
  j["parameters"]["dimensionless"]["g_c"] = 1.0;
  CHECK(config_error_path(j.dump()) == "parameters.dimensionless.g_c");

  j = json::parse(kMinimal);
  j["parameters"]["dimensionless"]["delta"] = 0.5;
  CHECK(config_error_path(j.dump()) == "parameters.dimensionless.F");

  j = json::parse(kMinimal);
  j["sweeps"][0]["axes"][0]["param"] = "omega";
  CHECK(config_error_path(j.dump()) == "sweeps[0].axes[0].param");

  j = json::parse(kMinimal);
  j["parameters"]["si"] = json::object();
  CHECK(config_error_path(j.dump()) == "parameters");

  CHECK(config_error_path("[1, 2]") == "<root>");
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("missing charge without an explicit drive is a validation error") {
  json j = json::parse(serialize_config(load_preset("sec5-feasibility")));
  auto& si = j["parameters"]["si"];
  si.erase("delta");
  si.erase("Q2");
  si["r0"] = 1e-3;
  try {
    parse_config(j.dump());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "parameters.si");
    CHECK(std::string(e.what()).find("Q2") != std::string::npos);
  }
}

TEST_CASE("an empty time grid is rejected") {
  json j = json::parse(kMinimal);
  j["mode"] = "dynamics";
  j["dynamics"] = {{"t_min", 0.0}, {"t_max", 1.0}, {"t_count", 0}};
  try {
    parse_config(j.dump());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("time grid is empty") != std::string::npos);
  }
}

TEST_CASE("numbers are written with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_number(std::nan("")) == "nan");
  for (double v : {1e-300, 6.02214076e23, -2.5, 0.5224485578656911}) {
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV and JSON outputs carry the reproducibility header") {
  const RunConfig cfg = parse_config(kMinimal);
  const fs::path dir = scratch("sink");
  OutputSink sink(dir, cfg);
  Table t;
  t.columns = {"x [1]", "y [1]"};
  t.add_row({format_number(1.0), format_number(2.0)});
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
  sink.write_csv("t.csv", t);
  sink.write_json("t.json", {{"k", 1}});

  const std::string csv = slurp(dir / "t.csv");
  CHECK(csv.find("# config_hash: " + config_hash(cfg)) != std::string::npos);
  CHECK(csv.find("# tolerances: fock_tail=") != std::string::npos);
  CHECK(csv.find("x [1],y [1]\n1,2\n") != std::string::npos);

  const json body = json::parse(slurp(dir / "t.json"));
  CHECK(body["provenance"]["config_hash"] == config_hash(cfg));
  CHECK(body["provenance"]["tolerances"]["convergence"] == 1e-4);
  CHECK(sink.written().size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("feasibility rows reproduce the laboratory numbers and pass the golden check") {
  const RunConfig cfg = load_preset("sec5-feasibility");
  CommandOptions opt;
  opt.golden = true;
  const CommandResult res = cmd_feasibility(cfg, opt);
  CHECK(res.exit_code == 0);
  for (const auto& row : feasibility_rows(cfg)) {
    if (row.key == "en_t_gamma0") CHECK(row.value == doctest::Approx(0.5224).epsilon(2e-3));
    if (row.key == "s") CHECK(row.value == doctest::Approx(6.9649).epsilon(1e-3));
  }

  RunConfig broken = cfg;
  broken.golden->values["s"] = 7.5;
  CHECK(cmd_feasibility(broken, opt).exit_code == 1);
}

TEST_CASE("sweep command writes CSV, JSON, gnuplot and the echoed config") {
  RunConfig cfg = parse_config(kMinimal);
  cfg.gnuplot = true;
  const fs::path dir = scratch("sweep");
  CommandOptions opt;
  opt.out_dir = dir.string();
  const CommandResult res = cmd_sweep(cfg, opt);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "sweep_F.csv"));
  CHECK(fs::exists(dir / "sweep_F.json"));
  CHECK(fs::exists(dir / "sweep_F.gp"));

  // The echoed config parses back to the same configuration.
  const RunConfig echoed = load_config_file((dir / "config.json").string());
  CHECK(echoed == cfg);

  std::istringstream csv(slurp(dir / "sweep_F.csv"));
  std::string line;
  int data_rows = 0;
  bool header_seen = false;
  while (std::getline(csv, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line.rfind("F [omega_tilde],EN", 0) == 0);
      continue;
    }
    ++data_rows;
  }
  CHECK(data_rows == 5);
  fs::remove_all(dir);
}

TEST_CASE("dynamics command produces the four curves") {
  RunConfig cfg = load_preset("fig3a");
  cfg.dynamics->t_count = 7;
  const CommandResult res = cmd_dynamics(cfg, {});
  CHECK(res.exit_code == 0);
  const json& series = res.report["series"];
  REQUIRE(series.size() == 1);
  CHECK(series[0]["analytic"].size() == 7);
  for (const char* cut : {"tp_qubit", "tp_mediator", "qubit_mediator"}) {
    CHECK(series[0]["fock"][cut].size() == 7);
  }
  // Analytic and oracle TP-qubit curves coincide.
  for (std::size_t k = 0; k < 7; ++k) {
    CHECK(std::fabs(series[0]["analytic"][k].get<double>() -
                    series[0]["fock"]["tp_qubit"][k].get<double>()) < 1e-3);
  }
}

TEST_CASE("validation flags the frame restriction at large squeezing") {
  RunConfig cfg = load_preset("sec5-feasibility");
  cfg.validate.frame = fock::Frame::Lab;
  cfg.validate.overlap_samples = 5;
  cfg.validate.pt_samples = 2;
  cfg.validate.timeseries_points = 3;
  cfg.tolerances.n_max = 32;
  const validation::ValidationReport rep = validation::run_validation(cfg);
  REQUIRE_FALSE(rep.notes.empty());
  CHECK(rep.notes[0].find("frame restriction") != std::string::npos);
  CHECK(rep.find("epsilon_irrelevance")->status == validation::Status::Skipped);
  CHECK(rep.find("frame_equivalence")->status == validation::Status::Skipped);
  // Non-convergence is a failed check, not an exception.
  CHECK(rep.find("en_timeseries")->failed());
}

TEST_CASE("validation passes at the standard couplings and catches the negative control") {
  RunConfig cfg = load_preset("fig2");
  cfg.validate.overlap_samples = 40;
  cfg.validate.pt_samples = 4;
  cfg.validate.timeseries_points = 9;
  CHECK(validation::run_validation(cfg).all_passed());
  CHECK(cmd_validate(cfg, {}).exit_code == 0);

  cfg.validate.negative_control = "flip_overlap_phase";
  const validation::ValidationReport rep = validation::run_validation(cfg);
  CHECK(rep.find("overlap_oracle")->failed());
  CHECK(cmd_validate(cfg, {}).exit_code == 1);
}
