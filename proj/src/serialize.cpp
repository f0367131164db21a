#include "floquet/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "floquet/error.hpp"

namespace floquet::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

const char* method_name(IntegratorMethod m) {
  return m == IntegratorMethod::rk4_fixed ? "rk4" : "rk45";
}

json beta_json(const InverseTemperature& b) {
  if (b.infinite) return "inf";
  return b.beta;
}

json periods_json(const PeriodCount& n) {
  if (n.infinite) return "inf";
  return n.n;
}

}  // namespace

json protocol_json(const DriveProtocol& p) {
  json j;
  j["kind"] = p.kind() == ProtocolKind::sinusoidal ? "sinusoidal" : "tabulated";
  j["h0"] = p.h0();
  j["amplitude"] = p.amplitude();
  j["omega"] = p.omega();
  j["period"] = p.period();
  j["h_initial"] = p.h_initial();
  if (p.kind() == ProtocolKind::sinusoidal) {
    j["phase"] = p.phase();
  } else {
    j["samples"] = p.samples();
  }
  return j;
}

json integrator_json(const IntegratorConfig& cfg) {
  return {{"method", method_name(cfg.method)},
          {"steps_per_period", cfg.steps_per_period},
          {"tolerance", cfg.tolerance},
          {"max_steps", cfg.max_steps}};
}

json provenance(const SpectrumTable& table, const json& run_config) {
  return {{"generator", "floquet-work"},
          {"protocol", protocol_json(table.protocol())},
          {"integrator", integrator_json(table.integrator())},
          {"grid", {{"n_k", table.size()}, {"scheme", "midpoint"}}},
          {"run_config", run_config}};
}

std::string spectrum_csv(const SpectrumTable& table) {
  std::ostringstream out;
  out << "k,E_k,mu_k,r_plus_sq,xi_k\n";
  for (const auto& m : table.modes()) {
    out << format_double(m.k) << ',' << format_double(m.energy) << ',' << format_double(m.quasi_energy)
        << ',' << format_double(m.r_plus_sq) << ',' << format_double(m.xi) << '\n';
  }
  return out.str();
}

json spectrum_json(const SpectrumTable& table, const json& run_config) {
  json cols = {{"k", json::array()},        {"E_k", json::array()},  {"mu_k", json::array()},
               {"r_plus_sq", json::array()}, {"xi_k", json::array()}, {"imbalance", json::array()}};
  json flagged_fold = json::array(), flagged_degenerate = json::array();
  for (const auto& m : table.modes()) {
    cols["k"].push_back(m.k);
    cols["E_k"].push_back(m.energy);
    cols["mu_k"].push_back(m.quasi_energy);
    cols["r_plus_sq"].push_back(m.r_plus_sq);
    cols["xi_k"].push_back(m.xi);
    cols["imbalance"].push_back(m.imbalance);
    if (m.fold_boundary) flagged_fold.push_back(m.k);
    if (m.degenerate) flagged_degenerate.push_back(m.k);
  }
  return {{"provenance", provenance(table, run_config)},
          {"modes", cols},
          {"fold_boundary_k", flagged_fold},
          {"degenerate_k", flagged_degenerate}};
}

std::string cgf_csv(const CgfCurve& curve) {
  std::ostringstream out;
  if (curve.laplace) {
    out << "s,value\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i].real()) << '\n';
    }
  } else {
    out << "u,re,im\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i) {
      out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i].real()) << ','
          << format_double(curve.values[i].imag()) << '\n';
    }
  }
  return out.str();
}

json cgf_json(const CgfCurve& curve, const SpectrumTable& table, const json& run_config) {
  json values = json::array();
  for (const auto& v : curve.values) {
    if (curve.laplace) {
      values.push_back(v.real());
    } else {
      values.push_back({v.real(), v.imag()});
    }
  }
  return {{"provenance", provenance(table, run_config)},
          {"domain", curve.laplace ? "laplace" : "fourier"},
          {"n", periods_json(curve.n)},
          {"beta", beta_json(curve.beta)},
          {"grid", curve.grid},
          {"values", values}};
}

std::string cumulants_csv(const CumulantSet& c) {
  std::ostringstream out;
  out << "L,K1,K2,K1_per_L,K2_per_L,K2_from_cgf\n"
      << c.length << ',' << format_double(c.k1) << ',' << format_double(c.k2) << ','
      << format_double(c.k1_density()) << ',' << format_double(c.k2_density()) << ','
      << format_double(c.k2_cgf) << '\n';
  return out.str();
}

json cumulants_json(const CumulantSet& c, const SpectrumTable& table, const json& run_config) {
  return {{"provenance", provenance(table, run_config)},
          {"L", c.length},
          {"K1", c.k1},
          {"K2", c.k2},
          {"K1_per_L", c.k1_density()},
          {"K2_per_L", c.k2_density()},
          {"K2_from_cgf", c.k2_cgf}};
}

std::string entropy_csv(const EntropyCurve& curve) {
  std::ostringstream out;
  out << "omega,delta_S_irr,delta_S_irr_per_L\n";
  for (std::size_t i = 0; i < curve.omega.size(); ++i) {
    out << format_double(curve.omega[i]) << ',' << format_double(curve.entropy[i]) << ','
        << format_double(curve.entropy[i] / static_cast<double>(curve.length)) << '\n';
  }
  return out.str();
}

json entropy_json(const EntropyCurve& curve, const IntegratorConfig& cfg, const json& run_config) {
  return {{"provenance",
           {{"generator", "floquet-work"},
            {"protocol_family", {{"h0", curve.h0}, {"amplitude", curve.amplitude}, {"phase", 0.0}}},
            {"integrator", integrator_json(cfg)},
            {"grid", {{"n_k", curve.n_k}, {"scheme", "midpoint"}}},
            {"run_config", run_config}}},
          {"beta", beta_json(curve.beta)},
          {"L", curve.length},
          {"omega", curve.omega},
          {"delta_S_irr", curve.entropy}};
}

std::string histogram_csv(const WorkHistogram& hist) {
  std::ostringstream out;
  out << "# L=" << hist.length << '\n';
  out << "# n=" << (hist.n.infinite ? std::string("inf") : std::to_string(hist.n.n)) << '\n';
  if (!hist.approximation.empty()) out << "# approximation=" << hist.approximation << '\n';
  out << "# threshold=" << format_double(hist.threshold) << '\n';
  out << "# delta0_weight=" << format_double(hist.delta0_weight) << '\n';
  out << "# log_delta0_weight=" << format_double(hist.log_delta0_weight) << '\n';
  out << "W_lo,W_hi,probability,mean_W\n";
  for (const auto& b : hist.bins) {
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',' << format_double(b.probability)
        << ',' << format_double(b.mean_work) << '\n';
  }
  out << "# total_probability=" << format_double(hist.total_probability()) << '\n';
  return out.str();
}

json histogram_json(const WorkHistogram& hist, const SpectrumTable& table, const json& run_config) {
  json bins = json::array();
  for (const auto& b : hist.bins) {
    bins.push_back({{"W_lo", b.lo}, {"W_hi", b.hi}, {"probability", b.probability}, {"mean_W", b.mean_work}});
  }
  json j = {{"provenance", provenance(table, run_config)},
            {"L", hist.length},
            {"n", periods_json(hist.n)},
            {"bin_width", hist.bin_width},
            {"threshold", hist.threshold},
            {"delta0_weight", hist.delta0_weight},
            {"log_delta0_weight", hist.log_delta0_weight},
            {"total_probability", hist.total_probability()},
            {"bins", bins}};
  if (!hist.approximation.empty()) j["approximation"] = hist.approximation;
  return j;
}

std::string diagnostic_csv(const DiagnosticCurve& curve) {
  std::ostringstream out;
  out << "s,value\n";
  for (std::size_t i = 0; i < curve.s.size(); ++i) {
    out << format_double(curve.s[i]) << ',' << format_double(curve.values[i]) << '\n';
  }
  return out.str();
}

json diagnostic_json(const DiagnosticCurve& curve) {
  return {{"name", curve.name},
          {"plateau_value", curve.plateau_value},
          {"last_decade_variation", curve.last_decade_variation},
          {"plateaus", curve.plateaus},
          {"warnings", curve.warnings}};
}

json resonance_json(const ResonanceReport& r) {
  return {{"h0", r.h0},
          {"omega", r.omega},
          {"h_initial", r.h_initial},
          {"resonant", r.resonant},
          {"l", r.l},
          {"cdt", r.cdt},
          {"bessel_value", r.bessel_value},
          {"h_critical_distance", r.h_critical_distance},
          {"initial_gap", r.initial_gap},
          {"tol_res", r.tol_res},
          {"tol_cdt", r.tol_cdt}};
}

json small_k_json(const SmallKFit& f) {
  const bool linear = f.regime == SmallKRegime::resonant_linear;
  return {{"regime", linear ? "resonant-linear" : "nonresonant-quadratic"},
          {linear ? "beta" : "alpha_sq", f.coefficient},
          {"k_max", f.k_max},
          {"points", f.points},
          {"residual", f.residual},
          {"linear_residual", f.linear_residual},
          {"quadratic_residual", f.quadratic_residual},
          {"xi_zero", f.xi_zero}};
}

json diagnosis_json(const SingularityDiagnosis& d) {
  json j = {{"case", case_label(d.singularity)},
            {"W_threshold", d.w_threshold},
            {"fit_window", {d.window_lo, d.window_hi}},
            {"residual", d.residual},
            {"notes", d.notes}};
  switch (d.singularity) {
    case SingularityCase::sqrt_edge:
      j["a"] = d.strength;
      j["R_plateau"] = d.plateau_value;
      j["plateaus"] = d.plateaus;
      break;
    case SingularityCase::delta_prime_edge:
      j["a_c"] = d.strength;
      j["plateaus"] = d.plateaus;
      break;
    case SingularityCase::critical_power_law:
      j["D"] = d.strength;
      j["exponent"] = d.exponent;
      j["exponent_error"] = d.exponent_error;
      j["power_law"] = power_law_label(d.power_law);
      break;
  }
  return j;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path);
}

void write_json(const std::string& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

}  // namespace floquet::io
