#include "floquet/asymptotic_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "floquet/error.hpp"
#include "floquet/work_statistics.hpp"

namespace floquet {

namespace {

constexpr double kCriticalTol = 1e-9;

bool is_critical(double h_i) { return std::abs(h_i - 1.0) < kCriticalTol; }

void require_increasing_positive(std::span<const double> s_grid) {
  if (s_grid.empty()) throw InvalidArgument("s grid is empty");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > 0.0) || !std::isfinite(s_grid[i])) throw InvalidArgument("s grid must be positive");
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InvalidArgument("s grid must be increasing");
  }
}

}  // namespace

ResonanceReport classify_resonance(const DriveProtocol& protocol, int l_max, double tol_res,
                                   double tol_cdt) {
  if (l_max < 0) throw InvalidArgument("l_max must be >= 0");
  if (!(tol_res > 0.0) || !(tol_cdt > 0.0)) throw InvalidArgument("tolerances must be positive");
  ResonanceReport r;
  r.h0 = protocol.h0();
  r.omega = protocol.omega();
  r.h_initial = protocol.h_initial();
  r.initial_gap = 2.0 * std::abs(r.h_initial - 1.0);
  r.tol_res = tol_res;
  r.tol_cdt = tol_cdt;
  const double target = 2.0 * std::abs(r.h0 - 1.0);
  r.h_critical_distance = std::numeric_limits<double>::infinity();
  for (int l = 0; l <= l_max; ++l) {
    const double dist = std::abs(target - l * r.omega);
    if (dist < r.h_critical_distance) {
      r.h_critical_distance = dist;
      r.l = l;
    }
  }
  r.resonant = r.h_critical_distance < tol_res;
  if (r.resonant && protocol.kind() == ProtocolKind::sinusoidal) {
    r.bessel_value = bessel_j(r.l, 2.0 * protocol.amplitude() / r.omega);
    r.cdt = std::abs(r.bessel_value) < tol_cdt;
  }
  return r;
}

SmallKFit fit_small_k_overlap(const SpectrumTable& table, const ResonanceReport& report, double k_max) {
  std::vector<double> ks, r_small, r_plus, xis;
  for (const auto& m : table.modes()) {
    if (m.k > k_max) break;
    ks.push_back(m.k);
    // min(|r+|^2, |r-|^2) = (1 - |d|)/2 written without cancellation
    r_small.push_back(m.xi / (2.0 * (1.0 + std::abs(m.imbalance))));
    r_plus.push_back(m.r_plus_sq);
    xis.push_back(m.xi);
  }
  if (ks.size() < 8) {
    std::ostringstream msg;
    msg << "small-k fit needs >= 8 grid points below k_max=" << k_max << ", have " << ks.size();
    throw InvalidArgument(msg.str());
  }
  SmallKFit fit;
  fit.k_max = k_max;
  fit.points = static_cast<int>(ks.size());

  double sxx = 0.0, sxy = 0.0, skk = 0.0, sky = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double x = 0.25 * ks[i] * ks[i];
    sxx += x * x;
    sxy += x * r_small[i];
    skk += ks[i] * ks[i];
    sky += ks[i] * (r_plus[i] - 0.5);
  }
  const double alpha2 = sxy / sxx;
  const double slope = sky / skk;  // -beta / 2
  double q_res = 0.0, l_res = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double eq = r_small[i] - alpha2 * 0.25 * ks[i] * ks[i];
    const double el = r_plus[i] - 0.5 - slope * ks[i];
    q_res += eq * eq;
    l_res += el * el;
  }
  fit.quadratic_residual = std::sqrt(q_res);
  fit.linear_residual = std::sqrt(l_res);

  const std::vector<double> k3(ks.begin(), ks.begin() + 3), x3(xis.begin(), xis.begin() + 3);
  fit.xi_zero = fit_linear(k3, x3).coefficients[0];

  const bool linear = report.resonant && !report.cdt;
  fit.regime = linear ? SmallKRegime::resonant_linear : SmallKRegime::nonresonant_quadratic;
  fit.coefficient = linear ? -2.0 * slope : alpha2;
  fit.residual = linear ? fit.linear_residual : fit.quadratic_residual;
  if (linear != (fit.xi_zero > 0.5)) {
    std::ostringstream msg;
    msg << "small-k data contradict the " << (linear ? "resonant-linear" : "nonresonant-quadratic")
        << " regime: xi(k->0) extrapolates to " << fit.xi_zero << "; linear residual "
        << fit.linear_residual << ", quadratic residual " << fit.quadratic_residual;
    throw RegimeMismatch(msg.str(), fit.linear_residual, fit.quadratic_residual);
  }
  return fit;
}

double edge_coefficient_a(const SmallKFit& fit, double h_initial) {
  if (fit.regime != SmallKRegime::nonresonant_quadratic) {
    throw InvalidArgument("edge coefficient a needs a nonresonant-quadratic fit");
  }
  if (is_critical(h_initial)) throw InvalidArgument("h_i = 1 is the critical case; a is undefined");
  if (!(h_initial > 0.0)) throw InvalidArgument("edge coefficient a needs h_i > 0");
  const double ratio = std::abs(h_initial - 1.0) / h_initial;
  return fit.coefficient / (16.0 * std::sqrt(kPi)) * std::pow(ratio, 1.5);
}

void summarize_plateau(DiagnosticCurve& curve) {
  if (curve.s.empty()) {
    curve.plateaus = false;
    return;
  }
  const double s_lo = curve.s.back() / 10.0;
  std::vector<double> tail;
  for (std::size_t i = 0; i < curve.s.size(); ++i) {
    if (curve.s[i] >= s_lo) tail.push_back(curve.values[i]);
  }
  const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
  const double mean = std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
  curve.plateau_value = mean;
  if (mean == 0.0) {
    curve.last_decade_variation = *mx == *mn ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    curve.last_decade_variation = (*mx - *mn) / std::abs(mean);
  }
  curve.plateaus = tail.size() >= 2 && curve.last_decade_variation < kPlateauTolerance;
}

namespace {

DiagnosticCurve diagnostic_curve(const SpectrumTable& table, std::span<const double> s_grid,
                                 double power, const char* name) {
  require_increasing_positive(s_grid);
  const double h_i = table.h_initial();
  if (is_critical(h_i)) throw InvalidArgument(std::string(name) + " diagnostic needs h_i != 1");
  const double shift = std::abs(h_i - 1.0);
  for (double s : s_grid) {
    if (s * shift < 3.0 * (1.0 - 1e-12)) {
      std::ostringstream msg;
      msg << name << " diagnostic requires s |h_i - 1| >= 3; s=" << s << " gives " << s * shift;
      throw InvalidArgument(msg.str());
    }
  }
  DiagnosticCurve curve;
  curve.name = name;
  for (double s : s_grid) {
    const double v = cgf_asymptotic_excess(table, s, shift) * std::pow(s, power);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "grid truncated at s=" << s << ": scaled excess is not representable";
      curve.warnings.push_back(msg.str());
      break;
    }
    curve.s.push_back(s);
    curve.values.push_back(v);
  }
  summarize_plateau(curve);
  return curve;
}

}  // namespace

DiagnosticCurve diagnostic_R(const SpectrumTable& table, std::span<const double> s_grid) {
  return diagnostic_curve(table, s_grid, 1.5, "R");
}

DiagnosticCurve diagnostic_Rc(const SpectrumTable& table, std::span<const double> s_grid) {
  return diagnostic_curve(table, s_grid, -1.0, "R_c");
}

const char* case_label(SingularityCase c) {
  switch (c) {
    case SingularityCase::sqrt_edge: return "a";
    case SingularityCase::delta_prime_edge: return "b";
    case SingularityCase::critical_power_law: return "c";
  }
  return "?";
}

const char* power_law_label(PowerLawClass c) {
  switch (c) {
    case PowerLawClass::step: return "step";
    case PowerLawClass::quadratic_rise: return "quadratic-rise";
    case PowerLawClass::unclassified: return "unclassified";
  }
  return "?";
}

SingularityDiagnosis critical_power_fit(const SpectrumTable& table, std::span<const double> s_grid) {
  require_increasing_positive(s_grid);
  if (!is_critical(table.h_initial())) throw InvalidArgument("power-law fit needs h_i = 1");
  if (s_grid.front() < 10.0) throw InvalidArgument("power-law fit needs all s >= 10");
  std::vector<double> ys;
  for (double s : s_grid) {
    const double y = cgf_asymptotic_excess(table, s, 0.0);
    if (!(y > 0.0)) {
      std::ostringstream msg;
      msg << "cgf excess is not positive at s=" << s << " (" << y << ")";
      throw NumericalDomainError(msg.str());
    }
    ys.push_back(y);
  }
  const FitResult fit = fit_power_law(s_grid, ys);
  SingularityDiagnosis d;
  d.singularity = SingularityCase::critical_power_law;
  d.w_threshold = 0.0;
  d.strength = fit.coefficients[0];
  d.exponent = fit.coefficients[1];
  d.exponent_error = fit.standard_errors[1];
  d.window_lo = fit.window_lo;
  d.window_hi = fit.window_hi;
  d.residual = fit.residual_norm;
  if (std::abs(d.exponent - 1.0) <= 0.25) {
    d.power_law = PowerLawClass::step;
  } else if (std::abs(d.exponent - 3.0) <= 0.75) {
    d.power_law = PowerLawClass::quadratic_rise;
  } else {
    d.power_law = PowerLawClass::unclassified;
  }
  return d;
}

SingularityCase classify_case(const ResonanceReport& report) {
  if (is_critical(report.h_initial)) return SingularityCase::critical_power_law;
  if (report.resonant && !report.cdt) return SingularityCase::delta_prime_edge;
  return SingularityCase::sqrt_edge;
}

SingularityDiagnosis diagnose(const SpectrumTable& table, const ResonanceReport& report,
                              std::span<const double> s_grid, double k_max) {
  const SingularityCase c = classify_case(report);
  if (c == SingularityCase::critical_power_law) return critical_power_fit(table, s_grid);

  SingularityDiagnosis d;
  d.singularity = c;
  d.w_threshold = 2.0 * std::abs(report.h_initial - 1.0);
  const DiagnosticCurve curve =
      c == SingularityCase::sqrt_edge ? diagnostic_R(table, s_grid) : diagnostic_Rc(table, s_grid);
  d.plateau_value = curve.plateau_value;
  d.plateaus = curve.plateaus;
  d.window_lo = curve.s.empty() ? 0.0 : curve.s.front();
  d.window_hi = curve.s.empty() ? 0.0 : curve.s.back();
  d.residual = curve.last_decade_variation;
  for (const auto& w : curve.warnings) d.notes.push_back(w);
  if (c == SingularityCase::sqrt_edge) {
    const SmallKFit fit = fit_small_k_overlap(table, report, k_max);
    if (report.h_initial > 0.0) {
      d.strength = edge_coefficient_a(fit, report.h_initial);
    } else {
      d.notes.push_back("h_i <= 0: closed-form a not defined; strength left at 0");
    }
  } else {
    d.strength = curve.plateau_value;
  }
  return d;
}

FitResult threshold_from_decay(const SpectrumTable& table, std::span<const double> s_grid) {
  require_increasing_positive(s_grid);
  if (s_grid.size() < 4) throw InvalidArgument("threshold fit needs at least 4 s values");
  double reference = std::numeric_limits<double>::infinity();
  for (const auto& m : table.modes()) reference = std::min(reference, m.energy);
  std::vector<double> ones, ss, logs, ys;
  for (double s : s_grid) {
    const double scaled = cgf_asymptotic_excess(table, s, reference);
    if (!(scaled > 0.0)) throw NumericalDomainError("cgf excess is not positive; no decay to fit");
    ones.push_back(1.0);
    ss.push_back(s);
    logs.push_back(std::log(s));
    ys.push_back(std::log(scaled) - 2.0 * s * reference);
  }
  FitResult fit = fit_least_squares({ones, ss, logs}, ys);
  fit.window_lo = s_grid.front();
  fit.window_hi = s_grid.back();
  return fit;
}

}  // namespace floquet
