#ifndef FLOQUET_C_H
#define FLOQUET_C_H

/*
 * C interface to the driven Ising-chain work-statistics library.
 *
 * Every function returns an fw_status. On failure a description of the last
 * error on the calling thread is available from fw_last_error(). Handles are
 * opaque, immutable after construction and safe to share between threads.
 */

#include <stddef.h>

#if defined(_WIN32)
#define FW_API __declspec(dllexport)
#else
#define FW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FW_OK = 0,
  FW_ERR_INVALID_ARGUMENT = 1,
  FW_ERR_NUMERICAL = 2,
  FW_ERR_INTEGRATION = 3,
  FW_ERR_IO = 4,
  FW_ERR_REGIME_MISMATCH = 5,
  FW_ERR_INTERNAL = 6
} fw_status;

typedef struct fw_protocol fw_protocol;
typedef struct fw_spectrum fw_spectrum;
typedef struct fw_histogram fw_histogram;

typedef enum { FW_RK4_FIXED = 0, FW_RK45_ADAPTIVE = 1 } fw_method;

typedef struct {
  fw_method method;
  int steps_per_period;
  double tolerance;
  long max_steps;
} fw_integrator;

/* n periods, or the n -> infinity limit when `infinite` is non-zero. */
typedef struct {
  long n;
  int infinite;
} fw_periods;

/* Inverse temperature; zero_temperature selects the exact T = 0 branch. */
typedef struct {
  double beta;
  int zero_temperature;
} fw_beta;

typedef struct {
  int tabulated;
  double h0, amplitude, omega, phase, period, h_initial;
} fw_protocol_info;

typedef struct {
  double k, energy, quasi_energy, r_plus_sq, xi, imbalance;
  int degenerate, fold_boundary;
} fw_mode;

typedef struct {
  double h0, omega, h_initial;
  int resonant, l, cdt;
  double bessel_value, h_critical_distance, initial_gap, tol_res, tol_cdt;
} fw_resonance_report;

typedef enum { FW_RESONANT_LINEAR = 0, FW_NONRESONANT_QUADRATIC = 1 } fw_regime;

typedef struct {
  fw_regime regime;
  double coefficient; /* beta (linear) or alpha^2 (quadratic) */
  double k_max;
  int points;
  double residual, linear_residual, quadratic_residual, xi_zero;
} fw_small_k_fit;

typedef struct {
  double plateau_value;
  double last_decade_variation;
  int plateaus;
  size_t points; /* values written; fewer than requested if truncated */
} fw_plateau;

typedef enum { FW_CASE_A = 0, FW_CASE_B = 1, FW_CASE_C = 2 } fw_case;
typedef enum { FW_POWER_STEP = 0, FW_POWER_QUADRATIC = 1, FW_POWER_UNCLASSIFIED = 2 } fw_power_class;

typedef struct {
  fw_case singularity;
  double w_threshold;
  double strength; /* a, a_c or D */
  double plateau_value;
  double exponent, exponent_error;
  fw_power_class power_law;
  double window_lo, window_hi, residual;
  int plateaus;
} fw_diagnosis;

typedef struct {
  long length;
  double bin_width, threshold, delta0_weight, log_delta0_weight, total_probability;
  size_t bins;
} fw_histogram_info;

FW_API const char* fw_last_error(void);
FW_API const char* fw_version(void);

FW_API fw_integrator fw_integrator_default(void);
FW_API fw_status fw_bessel_j(int l, double x, double* out);

/* protocols */
FW_API fw_status fw_protocol_sinusoidal(double h0, double amplitude, double omega, double phase,
                                        fw_protocol** out);
FW_API fw_status fw_protocol_tabulated(const double* samples, size_t n, double omega,
                                       fw_protocol** out);
FW_API void fw_protocol_free(fw_protocol* p);
FW_API fw_status fw_protocol_get_info(const fw_protocol* p, fw_protocol_info* out);
FW_API fw_status fw_protocol_field(const fw_protocol* p, double t, double* out);

/* single-mode checks */
FW_API fw_status fw_rotated_frame_check(const fw_protocol* p, double k, const fw_integrator* cfg,
                                        double* deviation);

/* spectrum tables over k_j = (j - 1/2) pi / n_k; workers <= 0 means all cores */
FW_API fw_status fw_spectrum_build(const fw_protocol* p, int n_k, const fw_integrator* cfg,
                                   int workers, fw_spectrum** out);
FW_API void fw_spectrum_free(fw_spectrum* s);
FW_API size_t fw_spectrum_size(const fw_spectrum* s);
FW_API fw_status fw_spectrum_mode(const fw_spectrum* s, size_t j, fw_mode* out);
FW_API fw_status fw_spectrum_exchange_labels(const fw_spectrum* s, fw_spectrum** out);
FW_API fw_status fw_edge_quasi_energies(const fw_spectrum* s, double* mu_zero, double* mu_pi);

/* cumulant generating functions (per unit length) */
FW_API fw_status fw_cgf_finite_n(const fw_spectrum* s, long n, double sv, double* out);
FW_API fw_status fw_cgf_asymptotic(const fw_spectrum* s, double sv, double* out);
FW_API fw_status fw_fidelity_plateau(const fw_spectrum* s, double* out);
FW_API fw_status fw_cgf_excess(const fw_spectrum* s, double sv, double shift, double* out);
FW_API fw_status fw_cgf_finite_T(const fw_spectrum* s, long n, double u_re, double u_im, fw_beta beta,
                                 double* out_re, double* out_im);

/* k2: closed-form variance; k2_cgf: second derivative of the asymptotic CGF. Any output may be NULL. */
FW_API fw_status fw_cumulants(const fw_spectrum* s, long length, double* k1, double* k2, double* k2_cgf);
FW_API fw_status fw_avg_work(const fw_spectrum* s, fw_periods n, fw_beta beta, long length,
                             double* out);
/* h(t) = h0 + A cos(omega t); out_entropy has n_omega entries */
FW_API fw_status fw_entropy_sweep(double h0, double amplitude, const double* omegas, size_t n_omega,
                                  fw_beta beta, long length, int n_k, const fw_integrator* cfg,
                                  int workers, double* out_entropy);

/* finite-L work histogram */
FW_API fw_status fw_histogram_build(const fw_spectrum* s, fw_periods n, long length,
                                    double bin_width, int workers, fw_histogram** out);
FW_API void fw_histogram_free(fw_histogram* h);
FW_API fw_status fw_histogram_get_info(const fw_histogram* h, fw_histogram_info* out);
FW_API fw_status fw_histogram_bin(const fw_histogram* h, size_t i, double* lo, double* hi,
                                  double* probability, double* mean_work);

/* asymptotic analysis */
FW_API fw_status fw_classify_resonance(const fw_protocol* p, int l_max, double tol_res,
                                       double tol_cdt, fw_resonance_report* out);
FW_API fw_status fw_fit_small_k(const fw_spectrum* s, const fw_resonance_report* report,
                                double k_max, fw_small_k_fit* out);
FW_API fw_status fw_edge_coefficient_a(const fw_small_k_fit* fit, double h_initial, double* out);
/* values must hold n entries */
FW_API fw_status fw_diagnostic_R(const fw_spectrum* s, const double* s_grid, size_t n, double* values,
                                 fw_plateau* out);
FW_API fw_status fw_diagnostic_Rc(const fw_spectrum* s, const double* s_grid, size_t n, double* values,
                                  fw_plateau* out);
FW_API fw_status fw_critical_power_fit(const fw_spectrum* s, const double* s_grid, size_t n,
                                       fw_diagnosis* out);
FW_API fw_status fw_diagnose(const fw_spectrum* s, const fw_resonance_report* report,
                             const double* s_grid, size_t n, double k_max, fw_diagnosis* out);
FW_API fw_status fw_threshold_from_decay(const fw_spectrum* s, const double* s_grid, size_t n,
                                         double* w_threshold);

/*
 * Writers. Paths may be NULL to skip a format. run_config_json is embedded
 * verbatim in the provenance block (NULL for none).
 */
FW_API fw_status fw_write_spectrum(const fw_spectrum* s, const char* csv_path, const char* json_path,
                                   const char* run_config_json);
FW_API fw_status fw_write_cgf(const fw_spectrum* s, fw_periods n, const double* s_grid, size_t count,
                              const char* csv_path, const char* json_path,
                              const char* run_config_json);
FW_API fw_status fw_write_cumulants(const fw_spectrum* s, long length, const char* csv_path,
                                    const char* json_path, const char* run_config_json);
FW_API fw_status fw_write_entropy(double h0, double amplitude, const double* omegas,
                                  const double* entropy, size_t n_omega, fw_beta beta, long length,
                                  int n_k, const fw_integrator* cfg, const char* csv_path,
                                  const char* json_path, const char* run_config_json);
FW_API fw_status fw_write_histogram(const fw_histogram* h, const fw_spectrum* s, const char* csv_path,
                                    const char* json_path, const char* run_config_json);
/* which: 0 = R, 1 = R_c */
FW_API fw_status fw_write_diagnostic(const fw_spectrum* s, int which, const double* s_grid, size_t n,
                                     const char* csv_path, const char* json_path);
/* fit and diagnosis may be NULL */
FW_API fw_status fw_write_report(const char* json_path, const fw_resonance_report* report,
                                 const fw_small_k_fit* fit, const fw_diagnosis* diagnosis,
                                 const char* run_config_json);

#ifdef __cplusplus
}
#endif

#endif
