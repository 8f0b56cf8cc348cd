#include "gie/gie.h"

#include <cstring>
#include <new>
#include <string>

#include "gie/analytic.hpp"
#include "gie/commands.hpp"
#include "gie/config.hpp"
#include "gie/errors.hpp"
#include "gie/negativity.hpp"

struct gie_config {
  gie::io::RunConfig cfg;
};

struct gie_report {
  int exit_code = 0;
  std::string text;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
gie_status guarded(Fn fn) {
  try {
    g_last_error.clear();
    fn();
    return GIE_OK;
  } catch (const gie::Error& e) {
    g_last_error = e.what();
    return static_cast<gie_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GIE_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GIE_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return GIE_INTERNAL_ERROR;
  }
}

gie_status null_argument(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return GIE_INVALID_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

gie_frame to_c(const gie::units::SqueezedFrame& f) {
  return {f.omega_tilde, f.F, f.delta, f.s, f.omega_s, f.g_a_s, f.g_b_s, f.g_eff, f.t_period};
}

gie::units::SqueezedFrame frame_of(double g_a, double g_b, double F) {
  return gie::units::derive_squeezed_frame(gie::units::ModelParams::dimensionless(g_a, g_b, F));
}

}  // namespace

extern "C" {

const char* gie_version(void) { return GIE_VERSION_STRING; }

const char* gie_status_name(gie_status status) {
  if (status == GIE_OK) return "Ok";
  if (status == GIE_INTERNAL_ERROR) return "InternalError";
  return gie::error_code_name(static_cast<gie::ErrorCode>(static_cast<int>(status)));
}

const char* gie_last_error(void) { return g_last_error.c_str(); }

void gie_string_free(char* s) { delete[] s; }

gie_status gie_preset_names(char** out_names) {
  if (!out_names) return null_argument("out_names");
  return guarded([&] {
    std::string all;
    for (const auto& n : gie::io::preset_names()) all += (all.empty() ? "" : "\n") + n;
    *out_names = duplicate(all);
  });
}

gie_status gie_config_from_json(const char* json_text, gie_config** out) {
  if (!json_text) return null_argument("json_text");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gie_config{gie::io::parse_config(json_text)}; });
}

gie_status gie_config_from_file(const char* path, gie_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gie_config{gie::io::load_config_file(path)}; });
}

gie_status gie_config_from_preset(const char* name, gie_config** out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new gie_config{gie::io::load_preset(name)}; });
}

gie_status gie_config_to_json(const gie_config* cfg, char** out_json) {
  if (!cfg) return null_argument("cfg");
  if (!out_json) return null_argument("out_json");
  return guarded([&] { *out_json = duplicate(gie::io::serialize_config(cfg->cfg)); });
}

gie_status gie_config_hash(const gie_config* cfg, char** out_hash) {
  if (!cfg) return null_argument("cfg");
  if (!out_hash) return null_argument("out_hash");
  return guarded([&] { *out_hash = duplicate(gie::io::config_hash(cfg->cfg)); });
}

gie_status gie_config_set_threads(gie_config* cfg, unsigned threads) {
  if (!cfg) return null_argument("cfg");
  if (threads == 0) {
    g_last_error = "threads must be >= 1";
    return GIE_INVALID_ARGUMENT;
  }
  cfg->cfg.threads = threads;
  return GIE_OK;
}

gie_status gie_config_mode(const gie_config* cfg, gie_mode* out_mode) {
  if (!cfg) return null_argument("cfg");
  if (!out_mode) return null_argument("out_mode");
  *out_mode = static_cast<gie_mode>(static_cast<int>(cfg->cfg.mode));
  return GIE_OK;
}

void gie_config_free(gie_config* cfg) { delete cfg; }

gie_status gie_run(const gie_config* cfg, gie_mode mode, const char* out_dir, int golden,
                   gie_report** out_report) {
  if (!cfg) return null_argument("cfg");
  if (!out_report) return null_argument("out_report");
  if (mode < GIE_MODE_FEASIBILITY || mode > GIE_MODE_FROM_CONFIG) {
    g_last_error = "unknown mode";
    return GIE_INVALID_ARGUMENT;
  }
  return guarded([&] {
    const gie::io::Mode m = mode == GIE_MODE_FROM_CONFIG ? cfg->cfg.mode
                                                         : static_cast<gie::io::Mode>(int(mode));
    gie::io::CommandOptions opt;
    opt.out_dir = out_dir ? out_dir : "";
    opt.golden = golden != 0;
    opt.threads = cfg->cfg.threads;
    const gie::io::CommandResult res = gie::io::run_command(m, cfg->cfg, opt);
    *out_report = new gie_report{res.exit_code, res.text, res.report.dump(2)};
  });
}

int gie_report_exit_code(const gie_report* report) { return report ? report->exit_code : -1; }

const char* gie_report_text(const gie_report* report) { return report ? report->text.c_str() : ""; }

const char* gie_report_json(const gie_report* report) { return report ? report->json.c_str() : ""; }

void gie_report_free(gie_report* report) { delete report; }

gie_status gie_squeezed_frame(double g_a, double g_b, double F, gie_frame* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = to_c(frame_of(g_a, g_b, F)); });
}

gie_status gie_config_frame(const gie_config* cfg, gie_frame* out) {
  if (!cfg) return null_argument("cfg");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = to_c(gie::units::derive_squeezed_frame(gie::io::base_model(cfg->cfg)));
  });
}

gie_status gie_en_at_decoupling(double g_eff, double t_n, double* out_en) {
  if (!out_en) return null_argument("out_en");
  return guarded([&] { *out_en = gie::analytic::en_at_decoupling(g_eff, t_n); });
}

gie_status gie_en_at(double g_a, double g_b, double F, double gamma, double t, double* out_en) {
  if (!out_en) return null_argument("out_en");
  return guarded([&] {
    *out_en = gie::analytic::en_at(frame_of(g_a, g_b, F), {}, t, {gamma, 0.0});
  });
}

gie_status gie_partial_transpose(double g_a, double g_b, double F, double gamma, double t,
                                 double out_re[16], double out_im[16]) {
  if (!out_re || !out_im) return null_argument("out_re/out_im");
  return guarded([&] {
    const auto m =
        gie::analytic::partial_transpose_matrix(frame_of(g_a, g_b, F), {}, t, {gamma, 0.0});
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        out_re[4 * i + j] = m(i, j).real();
        out_im[4 * i + j] = m(i, j).imag();
      }
    }
  });
}

gie_status gie_log_negativity(const double* rho_re, const double* rho_im, const size_t* dims,
                              size_t n_dims, size_t transpose, double* out_en) {
  if (!rho_re || !rho_im) return null_argument("rho_re/rho_im");
  if (!dims || n_dims == 0) return null_argument("dims");
  if (!out_en) return null_argument("out_en");
  return guarded([&] {
    gie::negativity::DensityMatrix rho;
    rho.dims.assign(dims, dims + n_dims);
    const auto n = static_cast<Eigen::Index>(gie::negativity::total_dimension(rho.dims));
    rho.data.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        rho.data(i, j) = gie::cplx(rho_re[i * n + j], rho_im[i * n + j]);
      }
    }
    *out_en = gie::negativity::log_negativity(rho, transpose);
  });
}

}  // extern "C"
