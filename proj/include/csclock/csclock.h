#ifndef CSCLOCK_CSCLOCK_H
#define CSCLOCK_CSCLOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(CSCLOCK_BUILDING)
#define CSCLOCK_API __attribute__((visibility("default")))
#else
#define CSCLOCK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csclock_status {
  CSCLOCK_OK = 0,
  CSCLOCK_INVALID_ARGUMENT = 1,
  CSCLOCK_IO = 2,
  CSCLOCK_PARSE = 3,
  CSCLOCK_CONFIG = 4,
  CSCLOCK_COMPUTE = 5,
  CSCLOCK_USAGE = 6,
  CSCLOCK_INTERNAL = 7
} csclock_status;

/* Error state of the last failing call on this thread. Valid until the next failing call. */
CSCLOCK_API const char* csclock_last_error(void);
CSCLOCK_API const char* csclock_last_error_kind(void);
CSCLOCK_API const char* csclock_status_name(csclock_status s);
CSCLOCK_API const char* csclock_version(void);

/* Strings returned through char** are owned by the caller. */
CSCLOCK_API void csclock_string_free(char* s);

/* ---- datasets ---- */

typedef struct csclock_dataset csclock_dataset;

CSCLOCK_API csclock_status csclock_dataset_load(const char* path, csclock_dataset** out);
/* Text or JSON (leading '{'); validated like csclock_dataset_load. */
CSCLOCK_API csclock_status csclock_dataset_parse(const char* text, csclock_dataset** out);
CSCLOCK_API void csclock_dataset_free(csclock_dataset* d);
/* Unvalidated parse followed by a JSON validation report {"usable":..,"issues":[..]}. */
CSCLOCK_API csclock_status csclock_dataset_validate_text(const char* text, char** report_json);
CSCLOCK_API size_t csclock_dataset_transition_count(const csclock_dataset* d);

/* Levels are labels such as "6s1/2". wavelength_nm <= 0 selects the static limit. */
CSCLOCK_API csclock_status csclock_dynamic_polarizability(const csclock_dataset* d, const char* level,
                                                          double wavelength_nm, double* alpha0_a3, double* alpha2_a3);
CSCLOCK_API csclock_status csclock_hyperfine_polarizability(const csclock_dataset* d, const char* level,
                                                            double wavelength_nm, int f, int m, double* alpha_a3);
CSCLOCK_API csclock_status csclock_differential_polarizability(const csclock_dataset* d, const char* ground, int gf,
                                                               int gm, const char* excited, int ef, int em,
                                                               double wavelength_nm, double* delta_a3);
/* Writes up to capacity roots; *count receives the number found. */
CSCLOCK_API csclock_status csclock_find_magic(const csclock_dataset* d, const char* ground, int gf, int gm,
                                              const char* excited, int ef, int em, double min_nm, double max_nm,
                                              double step_nm, double* wavelength_nm, double* slope_a3_per_mhz,
                                              size_t capacity, size_t* count);
CSCLOCK_API csclock_status csclock_zeeman_energy(const csclock_dataset* d, const char* level, int f, int m,
                                                 double b_tesla, double* energy_hz);
CSCLOCK_API csclock_status csclock_hyperfine_energy(double a_hz, double b_hz, int twice_i, int twice_j, int f,
                                                    double* energy_hz);

/* ---- angular momentum; arguments are twice the quantum numbers ---- */

CSCLOCK_API csclock_status csclock_wigner3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3, double* out);
CSCLOCK_API csclock_status csclock_wigner6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6, double* out);

/* ---- scalar models ---- */

/* Units: "A^3", "a0^3", "SI". */
CSCLOCK_API csclock_status csclock_convert_polarizability(double value, const char* from, const char* to, double* out);
CSCLOCK_API csclock_status csclock_stretched_shift(double b_tesla, double* plus_hz, double* minus_hz);
CSCLOCK_API csclock_status csclock_talbot_length(double wavelength_um, double period_um, double* out_um);
CSCLOCK_API csclock_status csclock_bbr_shift(double ground_300k_hz, double excited_300k_hz, double temperature_k,
                                             double* shift_hz, double* sensitivity_hz_per_k);
/* target like "1ns@30d". */
CSCLOCK_API csclock_status csclock_fractional_target(const char* target, double* out);

typedef struct csclock_clock_params {
  double nu_c;
  double tau_a;
  double atom_number;
  double eta_col;
  double eta_det;
  double lo_psd_2fs;
  double lo_psd_2fm;
  double f_s;
  double f_m;
  double saturation;
} csclock_clock_params;

typedef struct csclock_stability_budget {
  double delta_nu;
  double ndot;
  double photocurrent_a;
  double snr;
  double sigma_qpn;
  double sigma_im_lo;
  double sigma_im_lo_2fs;
  double sigma_im_lo_2fm;
  double sigma_im_shot;
  double sigma_total;
} csclock_stability_budget;

CSCLOCK_API void csclock_clock_params_default(csclock_clock_params* p);
CSCLOCK_API csclock_status csclock_stability_budget_compute(const csclock_clock_params* p,
                                                            csclock_stability_budget* out);

/* Overlapping Allan deviation. tau values are rounded to multiples of tau0 and deduplicated;
   *count receives the number of points written to tau_out/sigma_out (each of length ntaus). */
CSCLOCK_API csclock_status csclock_allan_deviation(const double* y, size_t n, double tau0, const double* taus,
                                                   size_t ntaus, double* tau_out, double* sigma_out, size_t* count);

/* ---- config-driven sessions ---- */

typedef struct csclock_session csclock_session;
typedef struct csclock_artifacts csclock_artifacts;

typedef struct csclock_run_options {
  const char* target;     /* NULL: config value */
  const char* allocation; /* NULL: config value */
  int has_seed;
  uint64_t seed;
  unsigned threads; /* 0: hardware concurrency */
} csclock_run_options;

CSCLOCK_API csclock_status csclock_session_from_file(const char* path, csclock_session** out);
CSCLOCK_API csclock_status csclock_session_from_scenario(const char* name, csclock_session** out);
CSCLOCK_API csclock_status csclock_session_from_string(const char* yaml, const char* base_dir, csclock_session** out);
CSCLOCK_API void csclock_session_free(csclock_session* s);
/* "section.key=value" with a YAML value; the config is re-parsed immediately. */
CSCLOCK_API csclock_status csclock_session_set(csclock_session* s, const char* assignment);
CSCLOCK_API csclock_status csclock_session_validate(const csclock_session* s);
CSCLOCK_API const char* csclock_session_output_dir(const csclock_session* s);

CSCLOCK_API size_t csclock_command_count(void);
CSCLOCK_API const char* csclock_command_name(size_t i);

CSCLOCK_API csclock_status csclock_session_run(const csclock_session* s, const char* command,
                                               const csclock_run_options* opts, csclock_artifacts** out);
CSCLOCK_API size_t csclock_artifacts_count(const csclock_artifacts* a);
CSCLOCK_API const char* csclock_artifacts_name(const csclock_artifacts* a, size_t i);
CSCLOCK_API const char* csclock_artifacts_format(const csclock_artifacts* a, size_t i);
CSCLOCK_API const char* csclock_artifacts_content(const csclock_artifacts* a, size_t i, size_t* length);
CSCLOCK_API csclock_status csclock_artifacts_write(const csclock_artifacts* a, const char* directory);
CSCLOCK_API void csclock_artifacts_free(csclock_artifacts* a);

#ifdef __cplusplus
}
#endif

#endif
