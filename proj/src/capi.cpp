#include "floquet/floquet_c.h"

#include <string>
#include <utility>

#include "floquet/asymptotic_analysis.hpp"
#include "floquet/error.hpp"
#include "floquet/serialize.hpp"
#include "floquet/work_statistics.hpp"

struct fw_protocol {
  floquet::DriveProtocol value;
};
struct fw_spectrum {
  floquet::SpectrumTable value;
};
struct fw_histogram {
  floquet::WorkHistogram value;
};

namespace {

using namespace floquet;

thread_local std::string g_last_error;

template <class F>
fw_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FW_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
      case ErrorCode::invalid_argument: return FW_ERR_INVALID_ARGUMENT;
      case ErrorCode::numerical_domain: return FW_ERR_NUMERICAL;
      case ErrorCode::integration: return FW_ERR_INTEGRATION;
      case ErrorCode::io: return FW_ERR_IO;
      case ErrorCode::regime_mismatch: return FW_ERR_REGIME_MISMATCH;
    }
    return FW_ERR_INTERNAL;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return FW_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FW_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (p == nullptr) throw InvalidArgument(std::string(name) + " is NULL");
}

IntegratorConfig to_cfg(const fw_integrator* c) {
  IntegratorConfig cfg;
  if (c == nullptr) return cfg;
  cfg.method = c->method == FW_RK45_ADAPTIVE ? IntegratorMethod::rk45_adaptive : IntegratorMethod::rk4_fixed;
  cfg.steps_per_period = c->steps_per_period;
  cfg.tolerance = c->tolerance;
  cfg.max_steps = c->max_steps;
  return cfg;
}

PeriodCount to_periods(fw_periods n) {
  return n.infinite ? PeriodCount::asymptotic() : PeriodCount::periods(n.n);
}

InverseTemperature to_beta(fw_beta b) {
  return b.zero_temperature ? InverseTemperature::zero_temperature() : InverseTemperature::of(b.beta);
}

ResonanceReport to_report(const fw_resonance_report& r) {
  ResonanceReport o;
  o.h0 = r.h0;
  o.omega = r.omega;
  o.h_initial = r.h_initial;
  o.resonant = r.resonant != 0;
  o.l = r.l;
  o.cdt = r.cdt != 0;
  o.bessel_value = r.bessel_value;
  o.h_critical_distance = r.h_critical_distance;
  o.initial_gap = r.initial_gap;
  o.tol_res = r.tol_res;
  o.tol_cdt = r.tol_cdt;
  return o;
}

fw_resonance_report from_report(const ResonanceReport& r) {
  return {r.h0, r.omega, r.h_initial, r.resonant ? 1 : 0, r.l, r.cdt ? 1 : 0,
          r.bessel_value, r.h_critical_distance, r.initial_gap, r.tol_res, r.tol_cdt};
}

SmallKFit to_fit(const fw_small_k_fit& f) {
  SmallKFit o;
  o.regime = f.regime == FW_RESONANT_LINEAR ? SmallKRegime::resonant_linear
                                             : SmallKRegime::nonresonant_quadratic;
  o.coefficient = f.coefficient;
  o.k_max = f.k_max;
  o.points = f.points;
  o.residual = f.residual;
  o.linear_residual = f.linear_residual;
  o.quadratic_residual = f.quadratic_residual;
  o.xi_zero = f.xi_zero;
  return o;
}

fw_small_k_fit from_fit(const SmallKFit& f) {
  return {f.regime == SmallKRegime::resonant_linear ? FW_RESONANT_LINEAR : FW_NONRESONANT_QUADRATIC,
          f.coefficient, f.k_max, f.points, f.residual, f.linear_residual, f.quadratic_residual,
          f.xi_zero};
}

fw_diagnosis from_diagnosis(const SingularityDiagnosis& d) {
  fw_diagnosis o{};
  o.singularity = static_cast<fw_case>(static_cast<int>(d.singularity));
  o.w_threshold = d.w_threshold;
  o.strength = d.strength;
  o.plateau_value = d.plateau_value;
  o.exponent = d.exponent;
  o.exponent_error = d.exponent_error;
  o.power_law = static_cast<fw_power_class>(static_cast<int>(d.power_law));
  o.window_lo = d.window_lo;
  o.window_hi = d.window_hi;
  o.residual = d.residual;
  o.plateaus = d.plateaus ? 1 : 0;
  return o;
}

SingularityDiagnosis to_diagnosis(const fw_diagnosis& d) {
  SingularityDiagnosis o;
  o.singularity = static_cast<SingularityCase>(static_cast<int>(d.singularity));
  o.w_threshold = d.w_threshold;
  o.strength = d.strength;
  o.plateau_value = d.plateau_value;
  o.exponent = d.exponent;
  o.exponent_error = d.exponent_error;
  o.power_law = static_cast<PowerLawClass>(static_cast<int>(d.power_law));
  o.window_lo = d.window_lo;
  o.window_hi = d.window_hi;
  o.residual = d.residual;
  o.plateaus = d.plateaus != 0;
  return o;
}

io::json run_config(const char* text) {
  if (text == nullptr) return io::json::object();
  return io::json::parse(text);
}

std::span<const double> grid(const double* data, size_t n) {
  if (n > 0) require(data, "grid");
  return {data, n};
}

}  // namespace

extern "C" {

const char* fw_last_error(void) { return g_last_error.c_str(); }

const char* fw_version(void) { return "1.0.0"; }

fw_integrator fw_integrator_default(void) {
  const IntegratorConfig d;
  return {FW_RK4_FIXED, d.steps_per_period, d.tolerance, d.max_steps};
}

fw_status fw_bessel_j(int l, double x, double* out) {
  return guard([&] {
    require(out, "out");
    *out = bessel_j(l, x);
  });
}

fw_status fw_protocol_sinusoidal(double h0, double amplitude, double omega, double phase, fw_protocol** out) {
  return guard([&] {
    require(out, "out");
    *out = new fw_protocol{DriveProtocol::sinusoidal(h0, amplitude, omega, phase)};
  });
}

fw_status fw_protocol_tabulated(const double* samples, size_t n, double omega, fw_protocol** out) {
  return guard([&] {
    require(out, "out");
    require(samples, "samples");
    *out = new fw_protocol{DriveProtocol::tabulated(std::vector<double>(samples, samples + n), omega)};
  });
}

void fw_protocol_free(fw_protocol* p) { delete p; }

fw_status fw_protocol_get_info(const fw_protocol* p, fw_protocol_info* out) {
  return guard([&] {
    require(p, "protocol");
    require(out, "out");
    const auto& v = p->value;
    *out = {v.kind() == ProtocolKind::tabulated ? 1 : 0, v.h0(), v.amplitude(), v.omega(),
            v.phase(), v.period(), v.h_initial()};
  });
}

fw_status fw_protocol_field(const fw_protocol* p, double t, double* out) {
  return guard([&] {
    require(p, "protocol");
    require(out, "out");
    *out = p->value.field(t);
  });
}

fw_status fw_rotated_frame_check(const fw_protocol* p, double k, const fw_integrator* cfg, double* deviation) {
  return guard([&] {
    require(p, "protocol");
    require(deviation, "deviation");
    *deviation = rotated_frame_check(k, p->value, to_cfg(cfg));
  });
}

fw_status fw_spectrum_build(const fw_protocol* p, int n_k, const fw_integrator* cfg, int workers,
                            fw_spectrum** out) {
  return guard([&] {
    require(p, "protocol");
    require(out, "out");
    *out = new fw_spectrum{build_spectrum(p->value, n_k, to_cfg(cfg), workers)};
  });
}

void fw_spectrum_free(fw_spectrum* s) { delete s; }

size_t fw_spectrum_size(const fw_spectrum* s) { return s == nullptr ? 0 : s->value.size(); }

fw_status fw_spectrum_mode(const fw_spectrum* s, size_t j, fw_mode* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    if (j >= s->value.size()) throw InvalidArgument("mode index out of range");
    const auto& m = s->value.modes()[j];
    *out = {m.k, m.energy, m.quasi_energy, m.r_plus_sq, m.xi, m.imbalance, m.degenerate ? 1 : 0,
            m.fold_boundary ? 1 : 0};
  });
}

fw_status fw_spectrum_exchange_labels(const fw_spectrum* s, fw_spectrum** out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = new fw_spectrum{s->value.with_exchanged_labels()};
  });
}

fw_status fw_edge_quasi_energies(const fw_spectrum* s, double* mu_zero, double* mu_pi) {
  return guard([&] {
    require(s, "spectrum");
    const EdgeQuasiEnergies e = edge_quasi_energies(s->value);
    if (mu_zero) *mu_zero = e.mu_zero;
    if (mu_pi) *mu_pi = e.mu_pi;
  });
}

fw_status fw_cgf_finite_n(const fw_spectrum* s, long n, double sv, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = cgf_finite_n(s->value, n, sv);
  });
}

fw_status fw_cgf_asymptotic(const fw_spectrum* s, double sv, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = cgf_asymptotic(s->value, sv);
  });
}

fw_status fw_fidelity_plateau(const fw_spectrum* s, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = fidelity_plateau(s->value);
  });
}

fw_status fw_cgf_excess(const fw_spectrum* s, double sv, double shift, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = cgf_asymptotic_excess(s->value, sv, shift);
  });
}

fw_status fw_cgf_finite_T(const fw_spectrum* s, long n, double u_re, double u_im, fw_beta beta,
                          double* out_re, double* out_im) {
  return guard([&] {
    require(s, "spectrum");
    require(out_re, "out_re");
    require(out_im, "out_im");
    const cplx v = cgf_finite_T(s->value, n, cplx(u_re, u_im), to_beta(beta));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

fw_status fw_cumulants(const fw_spectrum* s, long length, double* k1, double* k2, double* k2_cgf) {
  return guard([&] {
    require(s, "spectrum");
    const CumulantSet c = cumulants_asymptotic(s->value, length);
    if (k1) *k1 = c.k1;
    if (k2) *k2 = c.k2;
    if (k2_cgf) *k2_cgf = c.k2_cgf;
  });
}

fw_status fw_avg_work(const fw_spectrum* s, fw_periods n, fw_beta beta, long length, double* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = avg_work_finite_T(s->value, to_periods(n), to_beta(beta), length);
  });
}

fw_status fw_entropy_sweep(double h0, double amplitude, const double* omegas, size_t n_omega, fw_beta beta,
                           long length, int n_k, const fw_integrator* cfg, int workers,
                           double* out_entropy) {
  return guard([&] {
    require(out_entropy, "out_entropy");
    const EntropyCurve c = entropy_sweep(h0, amplitude, grid(omegas, n_omega), to_beta(beta), length,
                                         n_k, to_cfg(cfg), workers);
    std::copy(c.entropy.begin(), c.entropy.end(), out_entropy);
  });
}

fw_status fw_histogram_build(const fw_spectrum* s, fw_periods n, long length, double bin_width,
                             int workers, fw_histogram** out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = new fw_histogram{work_histogram_finite_L(s->value, to_periods(n), length, bin_width, workers)};
  });
}

void fw_histogram_free(fw_histogram* h) { delete h; }

fw_status fw_histogram_get_info(const fw_histogram* h, fw_histogram_info* out) {
  return guard([&] {
    require(h, "histogram");
    require(out, "out");
    const auto& v = h->value;
    *out = {v.length, v.bin_width, v.threshold, v.delta0_weight, v.log_delta0_weight,
            v.total_probability(), v.bins.size()};
  });
}

fw_status fw_histogram_bin(const fw_histogram* h, size_t i, double* lo, double* hi, double* probability,
                           double* mean_work) {
  return guard([&] {
    require(h, "histogram");
    if (i >= h->value.bins.size()) throw InvalidArgument("bin index out of range");
    const auto& b = h->value.bins[i];
    if (lo) *lo = b.lo;
    if (hi) *hi = b.hi;
    if (probability) *probability = b.probability;
    if (mean_work) *mean_work = b.mean_work;
  });
}

fw_status fw_classify_resonance(const fw_protocol* p, int l_max, double tol_res, double tol_cdt,
                                fw_resonance_report* out) {
  return guard([&] {
    require(p, "protocol");
    require(out, "out");
    *out = from_report(classify_resonance(p->value, l_max, tol_res, tol_cdt));
  });
}

fw_status fw_fit_small_k(const fw_spectrum* s, const fw_resonance_report* report, double k_max,
                         fw_small_k_fit* out) {
  return guard([&] {
    require(s, "spectrum");
    require(report, "report");
    require(out, "out");
    *out = from_fit(fit_small_k_overlap(s->value, to_report(*report), k_max));
  });
}

fw_status fw_edge_coefficient_a(const fw_small_k_fit* fit, double h_initial, double* out) {
  return guard([&] {
    require(fit, "fit");
    require(out, "out");
    *out = edge_coefficient_a(to_fit(*fit), h_initial);
  });
}

namespace {

fw_status diagnostic(const fw_spectrum* s, const double* s_grid, size_t n, double* values, fw_plateau* out,
                     bool critical_form) {
  return guard([&] {
    require(s, "spectrum");
    require(values, "values");
    const DiagnosticCurve c =
        critical_form ? diagnostic_Rc(s->value, grid(s_grid, n)) : diagnostic_R(s->value, grid(s_grid, n));
    std::copy(c.values.begin(), c.values.end(), values);
    if (out) *out = {c.plateau_value, c.last_decade_variation, c.plateaus ? 1 : 0, c.values.size()};
  });
}

}  // namespace

fw_status fw_diagnostic_R(const fw_spectrum* s, const double* s_grid, size_t n, double* values, fw_plateau* out) {
  return diagnostic(s, s_grid, n, values, out, false);
}

fw_status fw_diagnostic_Rc(const fw_spectrum* s, const double* s_grid, size_t n, double* values, fw_plateau* out) {
  return diagnostic(s, s_grid, n, values, out, true);
}

fw_status fw_critical_power_fit(const fw_spectrum* s, const double* s_grid, size_t n, fw_diagnosis* out) {
  return guard([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = from_diagnosis(critical_power_fit(s->value, grid(s_grid, n)));
  });
}

fw_status fw_diagnose(const fw_spectrum* s, const fw_resonance_report* report, const double* s_grid, size_t n,
                      double k_max, fw_diagnosis* out) {
  return guard([&] {
    require(s, "spectrum");
    require(report, "report");
    require(out, "out");
    *out = from_diagnosis(diagnose(s->value, to_report(*report), grid(s_grid, n), k_max));
  });
}

fw_status fw_threshold_from_decay(const fw_spectrum* s, const double* s_grid, size_t n, double* w_threshold) {
  return guard([&] {
    require(s, "spectrum");
    require(w_threshold, "w_threshold");
    *w_threshold = -threshold_from_decay(s->value, grid(s_grid, n)).coefficients[1];
  });
}

fw_status fw_write_spectrum(const fw_spectrum* s, const char* csv_path, const char* json_path,
                            const char* run_config_json) {
  return guard([&] {
    require(s, "spectrum");
    const io::json cfg = run_config(run_config_json);
    if (csv_path) io::write_text(csv_path, io::spectrum_csv(s->value));
    if (json_path) io::write_json(json_path, io::spectrum_json(s->value, cfg));
  });
}

fw_status fw_write_cgf(const fw_spectrum* s, fw_periods n, const double* s_grid, size_t count,
                       const char* csv_path, const char* json_path, const char* run_config_json) {
  return guard([&] {
    require(s, "spectrum");
    const io::json cfg = run_config(run_config_json);
    const CgfCurve c = cgf_curve(s->value, to_periods(n), grid(s_grid, count));
    if (csv_path) io::write_text(csv_path, io::cgf_csv(c));
    if (json_path) io::write_json(json_path, io::cgf_json(c, s->value, cfg));
  });
}

fw_status fw_write_cumulants(const fw_spectrum* s, long length, const char* csv_path, const char* json_path,
                             const char* run_config_json) {
  return guard([&] {
    require(s, "spectrum");
    const io::json cfg = run_config(run_config_json);
    const CumulantSet c = cumulants_asymptotic(s->value, length);
    if (csv_path) io::write_text(csv_path, io::cumulants_csv(c));
    if (json_path) io::write_json(json_path, io::cumulants_json(c, s->value, cfg));
  });
}

fw_status fw_write_entropy(double h0, double amplitude, const double* omegas, const double* entropy,
                           size_t n_omega, fw_beta beta, long length, int n_k, const fw_integrator* cfg,
                           const char* csv_path, const char* json_path, const char* run_config_json) {
  return guard([&] {
    const io::json rc = run_config(run_config_json);
    EntropyCurve c;
    c.omega.assign(omegas, omegas + n_omega);
    c.entropy.assign(entropy, entropy + n_omega);
    c.beta = to_beta(beta);
    c.length = length;
    c.h0 = h0;
    c.amplitude = amplitude;
    c.n_k = n_k;
    if (csv_path) io::write_text(csv_path, io::entropy_csv(c));
    if (json_path) io::write_json(json_path, io::entropy_json(c, to_cfg(cfg), rc));
  });
}

fw_status fw_write_histogram(const fw_histogram* h, const fw_spectrum* s, const char* csv_path,
                             const char* json_path, const char* run_config_json) {
  return guard([&] {
    require(h, "histogram");
    require(s, "spectrum");
    const io::json cfg = run_config(run_config_json);
    if (csv_path) io::write_text(csv_path, io::histogram_csv(h->value));
    if (json_path) io::write_json(json_path, io::histogram_json(h->value, s->value, cfg));
  });
}

fw_status fw_write_diagnostic(const fw_spectrum* s, int which, const double* s_grid, size_t n,
                              const char* csv_path, const char* json_path) {
  return guard([&] {
    require(s, "spectrum");
    const DiagnosticCurve c =
        which == 1 ? diagnostic_Rc(s->value, grid(s_grid, n)) : diagnostic_R(s->value, grid(s_grid, n));
    if (csv_path) io::write_text(csv_path, io::diagnostic_csv(c));
    if (json_path) io::write_json(json_path, io::diagnostic_json(c));
  });
}

fw_status fw_write_report(const char* json_path, const fw_resonance_report* report, const fw_small_k_fit* fit,
                          const fw_diagnosis* diagnosis, const char* run_config_json) {
  return guard([&] {
    require(json_path, "json_path");
    require(report, "report");
    io::json doc;
    doc["provenance"] = {{"generator", "floquet-work"}, {"run_config", run_config(run_config_json)}};
    doc["resonance"] = io::resonance_json(to_report(*report));
    if (fit) doc["small_k_fit"] = io::small_k_json(to_fit(*fit));
    if (diagnosis) doc["diagnosis"] = io::diagnosis_json(to_diagnosis(*diagnosis));
    io::write_json(json_path, doc);
  });
}

}  // extern "C"
