#pragma once

// Resonance classification, small-k overlap fits and large-s diagnostics of
// the stationary cumulant generating function.

#include <span>
#include <string>
#include <vector>

#include "floquet/ising_floquet.hpp"

namespace floquet {

inline constexpr double kDefaultTolRes = 1e-9;
inline constexpr double kDefaultTolCdt = 1e-6;
inline constexpr double kDefaultSmallKMax = 0.05;

struct ResonanceReport {
  double h0 = 0.0;
  double omega = 0.0;
  double h_initial = 0.0;
  bool resonant = false;
  int l = -1;                        // nearest integer order, -1 if none scanned
  bool cdt = false;
  double bessel_value = 0.0;         // J_l(2A/omega) at the matched l (sinusoidal only)
  double h_critical_distance = 0.0;  // min_l |2|h0 - 1| - l omega|
  double initial_gap = 0.0;          // 2 |h_i - 1|
  double tol_res = kDefaultTolRes;
  double tol_cdt = kDefaultTolCdt;
};

ResonanceReport classify_resonance(const DriveProtocol& protocol, int l_max,
                                   double tol_res = kDefaultTolRes,
                                   double tol_cdt = kDefaultTolCdt);

enum class SmallKRegime { resonant_linear, nonresonant_quadratic };

struct SmallKFit {
  SmallKRegime regime = SmallKRegime::nonresonant_quadratic;
  // beta of |r+|^2 = 1/2 - beta k / 2, or alpha^2 of min(|r+|^2, |r-|^2) = alpha^2 k^2 / 4.
  double coefficient = 0.0;
  double k_max = 0.0;
  int points = 0;
  double residual = 0.0;            // residual norm of the reported regime
  double linear_residual = 0.0;
  double quadratic_residual = 0.0;
  double xi_zero = 0.0;             // xi extrapolated to k = 0
};

// Throws RegimeMismatch when xi_{k->0} contradicts the regime implied by the report.
SmallKFit fit_small_k_overlap(const SpectrumTable& table, const ResonanceReport& report,
                              double k_max = kDefaultSmallKMax);

// a = alpha^2 / (16 sqrt(pi)) (|h_i - 1| / h_i)^{3/2}
double edge_coefficient_a(const SmallKFit& fit, double h_initial);

struct DiagnosticCurve {
  std::string name;  // "R" or "R_c"
  std::vector<double> s;
  std::vector<double> values;
  double plateau_value = 0.0;       // mean over the last decade of s
  double last_decade_variation = 0.0;  // (max - min) / |mean| over the last decade
  bool plateaus = false;            // variation < 5%
  std::vector<std::string> warnings;
};

inline constexpr double kPlateauTolerance = 0.05;

// R(s) = [cgf_inf(s) - g_inf] s^{3/2} e^{2|h_i-1|s}; needs s |h_i - 1| >= 3.
DiagnosticCurve diagnostic_R(const SpectrumTable& table, std::span<const double> s_grid);
// R_c(s) = [cgf_inf(s) - g_inf] e^{2|h_i-1|s} / s; needs s |h_i - 1| >= 3.
DiagnosticCurve diagnostic_Rc(const SpectrumTable& table, std::span<const double> s_grid);

void summarize_plateau(DiagnosticCurve& curve);

enum class SingularityCase { sqrt_edge, delta_prime_edge, critical_power_law };
enum class PowerLawClass { step, quadratic_rise, unclassified };

const char* case_label(SingularityCase c);        // "a", "b", "c"
const char* power_law_label(PowerLawClass c);

struct SingularityDiagnosis {
  SingularityCase singularity = SingularityCase::sqrt_edge;
  double w_threshold = 0.0;
  double strength = 0.0;   // a (predicted from alpha^2), a_c, or D
  double plateau_value = 0.0;  // measured R or R_c plateau (cases a, b)
  double exponent = 0.0;   // b (case c only)
  double exponent_error = 0.0;
  PowerLawClass power_law = PowerLawClass::unclassified;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double residual = 0.0;
  bool plateaus = false;   // cases a, b
  std::vector<std::string> notes;
};

// Fits cgf_inf(s) - g_inf ~ D / s^b for h_i = 1; all s >= 10.
SingularityDiagnosis critical_power_fit(const SpectrumTable& table, std::span<const double> s_grid);

// Case from (h_i, h0, omega, CDT) alone; the fits then measure its strength.
SingularityCase classify_case(const ResonanceReport& report);

SingularityDiagnosis diagnose(const SpectrumTable& table, const ResonanceReport& report,
                              std::span<const double> s_grid, double k_max = kDefaultSmallKMax);

// Decay rate W of cgf_inf(s) - g_inf ~ C s^p e^{-W s} from a fit with
// regressors {1, s, ln s}; coefficient order {ln C, -W, p}.
FitResult threshold_from_decay(const SpectrumTable& table, std::span<const double> s_grid);

}  // namespace floquet
