/* C interface to the entanglement simulator. Objects are opaque handles;
 * every call returns a gie_status and, on failure, stores a message that
 * gie_last_error() returns for the calling thread. Strings returned through
 * out-parameters are owned by the caller and released with gie_string_free. */
#ifndef GIE_GIE_H
#define GIE_GIE_H

#include <stddef.h>

#if defined(GIE_BUILDING_LIBRARY)
#define GIE_API __attribute__((visibility("default")))
#else
#define GIE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gie_status {
  GIE_OK = 0,
  GIE_INVALID_ARGUMENT = 1,
  GIE_INVALID_SETUP = 2,
  GIE_NEGATIVE_SQUARED_FREQUENCY = 3,
  GIE_UNSTABLE_FRAME = 4,
  GIE_DIMENSION_MISMATCH = 5,
  GIE_NON_HERMITIAN_INPUT = 6,
  GIE_CUTOFF_TOO_SMALL = 7,
  GIE_EIGEN_FAILURE = 8,
  GIE_NO_CONVERGENCE = 9,
  GIE_INVALID_AXIS = 10,
  GIE_INSUFFICIENT_POINTS = 11,
  GIE_CONFIG_ERROR = 12,
  GIE_IO_ERROR = 13,
  GIE_INTERNAL_ERROR = 99
} gie_status;

typedef enum gie_mode {
  GIE_MODE_FEASIBILITY = 0,
  GIE_MODE_DYNAMICS = 1,
  GIE_MODE_SWEEP = 2,
  GIE_MODE_RATE = 3,
  GIE_MODE_VALIDATE = 4,
  GIE_MODE_FROM_CONFIG = 5
} gie_mode;

typedef struct gie_config gie_config;
typedef struct gie_report gie_report;

/* Squeezed-frame quantities of a dimensionless or SI model. */
typedef struct gie_frame {
  double omega_tilde;
  double F;
  double delta;
  double s;
  double omega_s;
  double g_a_s;
  double g_b_s;
  double g_eff;
  double t_period;
} gie_frame;

GIE_API const char* gie_version(void);
GIE_API const char* gie_status_name(gie_status status);
GIE_API const char* gie_last_error(void);
GIE_API void gie_string_free(char* s);

/* Presets: names separated by newlines. */
GIE_API gie_status gie_preset_names(char** out_names);

GIE_API gie_status gie_config_from_json(const char* json_text, gie_config** out);
GIE_API gie_status gie_config_from_file(const char* path, gie_config** out);
GIE_API gie_status gie_config_from_preset(const char* name, gie_config** out);
GIE_API gie_status gie_config_to_json(const gie_config* cfg, char** out_json);
GIE_API gie_status gie_config_hash(const gie_config* cfg, char** out_hash);
GIE_API gie_status gie_config_set_threads(gie_config* cfg, unsigned threads);
GIE_API gie_status gie_config_mode(const gie_config* cfg, gie_mode* out_mode);
GIE_API void gie_config_free(gie_config* cfg);

/* Runs a subcommand. out_dir may be NULL or "" to skip file output. A
 * report is produced whenever the command ran, including failed checks. */
GIE_API gie_status gie_run(const gie_config* cfg, gie_mode mode, const char* out_dir, int golden,
                           gie_report** out_report);
GIE_API int gie_report_exit_code(const gie_report* report);
GIE_API const char* gie_report_text(const gie_report* report);
GIE_API const char* gie_report_json(const gie_report* report);
GIE_API void gie_report_free(gie_report* report);

/* Dimensionless model helpers (units of omega_tilde = 1). */
GIE_API gie_status gie_squeezed_frame(double g_a, double g_b, double F, gie_frame* out);
GIE_API gie_status gie_config_frame(const gie_config* cfg, gie_frame* out);
GIE_API gie_status gie_en_at_decoupling(double g_eff, double t_n, double* out_en);

/* Closed-form EN(t) and its 4x4 partial transpose (row-major re/im). The
 * default mediator state of the configuration model is used. */
GIE_API gie_status gie_en_at(double g_a, double g_b, double F, double gamma, double t,
                             double* out_en);
GIE_API gie_status gie_partial_transpose(double g_a, double g_b, double F, double gamma, double t,
                                         double out_re[16], double out_im[16]);

/* EN across the cut that transposes subsystem `transpose` of a density
 * matrix with the given subsystem dimensions; rho is row-major re/im. */
GIE_API gie_status gie_log_negativity(const double* rho_re, const double* rho_im,
                                      const size_t* dims, size_t n_dims, size_t transpose,
                                      double* out_en);

#ifdef __cplusplus
}
#endif

#endif
