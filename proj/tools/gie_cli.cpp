// Command-line front end; talks to the simulator only through gie.h.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gie/gie.h"

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string out;
  bool golden = false;
  unsigned threads = 0;
};

int fail(gie_status st) {
  std::cerr << "error [" << gie_status_name(st) << "]: " << gie_last_error() << '\n';
  return 2;
}

int run(gie_mode mode, const Options& o) {
  if (o.config.empty() == o.preset.empty()) {
    std::cerr << "error: give exactly one of --config and --preset\n";
    return 2;
  }
  gie_config* cfg = nullptr;
  gie_status st = o.config.empty() ? gie_config_from_preset(o.preset.c_str(), &cfg)
                                   : gie_config_from_file(o.config.c_str(), &cfg);
  if (st != GIE_OK) return fail(st);
  if (o.threads > 0 && (st = gie_config_set_threads(cfg, o.threads)) != GIE_OK) {
    gie_config_free(cfg);
    return fail(st);
  }
  gie_report* report = nullptr;
  st = gie_run(cfg, mode, o.out.c_str(), o.golden ? 1 : 0, &report);
  gie_config_free(cfg);
  if (st != GIE_OK) return fail(st);
  std::cout << gie_report_text(report);
  if (!o.out.empty()) std::cout << "outputs written to " << o.out << '\n';
  const int code = gie_report_exit_code(report);
  gie_report_free(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gravity-mediated entanglement simulator"};
  app.set_version_flag("--version", std::string(gie_version()));
  bool list = false;
  app.add_flag("--list-presets", list, "Print the embedded preset names");

  struct Sub {
    const char* name;
    const char* help;
    gie_mode mode;
  };
  const Sub subs[] = {
      {"feasibility", "Derive the experimental coefficients and regime checks", GIE_MODE_FEASIBILITY},
      {"dynamics", "Entanglement time series for each configured curve", GIE_MODE_DYNAMICS},
      {"sweep", "Entanglement over parameter grids", GIE_MODE_SWEEP},
      {"rate", "Entanglement-generation rate along a coupling axis", GIE_MODE_RATE},
      {"validate", "Closed form against the Fock-space oracle", GIE_MODE_VALIDATE},
  };
  Options opts[5];
  gie_mode chosen = GIE_MODE_FROM_CONFIG;
  int chosen_index = -1;
  for (int i = 0; i < 5; ++i) {
    CLI::App* sc = app.add_subcommand(subs[i].name, subs[i].help);
    sc->add_option("--config", opts[i].config, "JSON configuration file");
    sc->add_option("--preset", opts[i].preset, "Embedded preset name");
    sc->add_option("--out", opts[i].out, "Output directory");
    sc->add_flag("--golden", opts[i].golden, "Compare against the config's golden values");
    sc->add_option("--threads", opts[i].threads, "Worker threads")->check(CLI::PositiveNumber);
    sc->callback([&, i] {
      chosen = subs[i].mode;
      chosen_index = i;
    });
  }
  CLI11_PARSE(app, argc, argv);

  if (list) {
    char* names = nullptr;
    const gie_status st = gie_preset_names(&names);
    if (st != GIE_OK) return fail(st);
    std::cout << names << '\n';
    gie_string_free(names);
    return 0;
  }
  if (chosen_index < 0) {
    std::cerr << app.help();
    return 2;
  }
  return run(chosen, opts[chosen_index]);
}
