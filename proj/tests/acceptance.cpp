// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "floquet/asymptotic_analysis.hpp"
#include "floquet/error.hpp"
#include "floquet/work_statistics.hpp"

using namespace floquet;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  v.back() = hi;
  return v;
}

IntegratorConfig rk4(int steps) {
  IntegratorConfig cfg;
  cfg.steps_per_period = steps;
  return cfg;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. windowed average of the finite-n CGF against the stationary curve
Outcome cgf_convergence() {
  const auto t = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 2.0, 0.0), 1000, IntegratorConfig{});
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    double avg = 0.0;
    for (long n = 500; n <= 600; ++n) avg += cgf_finite_n(t, n, s);
    avg /= 101.0;
    worst = std::max(worst, std::abs(avg - cgf_asymptotic(t, s)));
  }
  return {worst < 1e-3, fmt("max |<cgf_n>_{500..600} - cgf_inf| = %.3e (tol 1e-3)", worst)};
}

// 2. CDT suppression of the stationary CGF
Outcome cdt_suppression() {
  const auto on = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 2.0, 0.0), 1000, IntegratorConfig{});
  const auto cdt = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 0.3623, 0.0), 1000, rk4(4096));
  double min_ratio = INFINITY;
  for (int i = 0; i <= 38; ++i) {
    const double s = 1.0 + 0.5 * i;
    min_ratio = std::min(min_ratio, std::abs(cgf_asymptotic(on, s)) / std::abs(cgf_asymptotic(cdt, s)));
  }
  return {min_ratio >= 10.0, fmt("min over s in [1,20] of |cgf(w=2)| / |cgf(w=0.3623)| = %.2f (need >= 10)", min_ratio)};
}

// 3. square-root edge: R(s) plateau and its predicted value
Outcome case_a_plateau() {
  const auto p = DriveProtocol::sinusoidal(1.3, 1.0, 2.0, 0.0);
  const auto t = build_spectrum(p, 4000, IntegratorConfig{});
  const auto report = classify_resonance(p, 8);
  const auto fit = fit_small_k_overlap(t, report);
  const double a = edge_coefficient_a(fit, p.h_initial());
  const auto curve = diagnostic_R(t, logspace(3.0 / 1.3, 1000.0, 60));
  const double rel = std::abs(curve.plateau_value / a - 1.0);
  return {curve.last_decade_variation < 0.05 && rel < 0.05,
          fmt("alpha^2 = %.5f, a = %.5f, R plateau = %.5f (rel. diff %.2f%%), last-decade variation %.2f%%",
              fit.coefficient, a, curve.plateau_value, 100 * rel, 100 * curve.last_decade_variation)};
}

// 4. delta-prime edge plateaus; the CDT drive does not
Outcome case_b_plateau() {
  const auto t = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 2.0, 0.0), 4000, IntegratorConfig{});
  const auto rc = diagnostic_Rc(t, logspace(3.0, 3000.0, 60));
  const auto tc = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 0.3623, 0.0), 4000, rk4(4096));
  const auto rcdt = diagnostic_Rc(tc, logspace(3.0, 3000.0, 60));
  const bool ok = rc.last_decade_variation < 0.05 && rc.plateau_value > 0.0 && rcdt.last_decade_variation > 0.25;
  return {ok, fmt("a_c = %.5f (variation %.2f%%); CDT drive variation %.1f%% (need > 25%%)", rc.plateau_value,
                  100 * rc.last_decade_variation, 100 * rcdt.last_decade_variation)};
}

// 5. power-law exponents for a critical initial field
Outcome case_c_exponents() {
  struct Drive {
    double h0, omega, phase, expected, tol;
    int steps;
  };
  const double half_pi = kPi / 2.0;
  const std::vector<Drive> drives = {
      {1.0, 2.0, -half_pi, 1.0, 0.05, 1024},      {1.0, 0.3623, -half_pi, 1.0, 0.05, 4096},
      {0.0, 1.3, 0.0, 1.0, 0.05, 1024},           {0.0, 1.0, 0.0, 3.0, 0.15, 1024},
      {0.0, 2.0 / 3.0, 0.0, 3.0, 0.15, 1024},
  };
  const auto s = logspace(100.0, 1000.0, 20);
  bool ok = true;
  std::string detail;
  for (const auto& d : drives) {
    const auto t = build_spectrum(DriveProtocol::sinusoidal(d.h0, 1.0, d.omega, d.phase), 8000, rk4(d.steps));
    const auto fit = critical_power_fit(t, s);
    const bool good = std::abs(fit.exponent - d.expected) <= d.tol;
    ok = ok && good;
    detail += fmt("%s[h0=%g w=%.4g: b=%.3f, want %g+-%g%s]", detail.empty() ? "" : " ", d.h0, d.omega,
                  fit.exponent, d.expected, d.tol, good ? "" : " MISS");
  }
  return {ok, detail};
}

// 6. entropy landscape: dips at J0(2/w) = 0, peaks at w = 4/p
Outcome entropy_landscape() {
  std::vector<double> w(400);
  for (int i = 0; i < 400; ++i) w[i] = 0.2 + 4.8 * i / 399.0;
  const double step = w[1] - w[0];
  IntegratorConfig cfg;
  cfg.method = IntegratorMethod::rk45_adaptive;
  cfg.tolerance = 1e-9;
  const auto curve = entropy_sweep(1.0, 1.0, w, InverseTemperature::of(10.0), 1000, 500, cfg);
  const auto& e = curve.entropy;
  auto has_extremum = [&](double target, bool minimum) {
    for (std::size_t i = 1; i + 1 < e.size(); ++i) {
      const bool ext = minimum ? (e[i] < e[i - 1] && e[i] < e[i + 1]) : (e[i] > e[i - 1] && e[i] > e[i + 1]);
      if (ext && std::abs(w[i] - target) <= step * (1.0 + 1e-9)) return true;
    }
    return false;
  };
  bool ok = true;
  std::string detail = "dips:";
  // zeros of J0
  for (double j : {2.404825557695773, 5.520078110286311, 8.653727912911013, 11.79153443901428}) {
    const double target = 2.0 / j;
    if (target < w.front() || target > w.back()) continue;
    const bool hit = has_extremum(target, true);
    ok = ok && hit;
    detail += fmt(" %.4f%s", target, hit ? "" : "(MISS)");
  }
  detail += "; peaks:";
  for (int p = 1; p <= 6; ++p) {
    const double target = 4.0 / p;
    if (target < w.front() || target > w.back()) continue;
    const bool hit = has_extremum(target, false);
    ok = ok && hit;
    detail += fmt(" %.4f%s", target, hit ? "" : "(MISS)");
  }
  double min_e = INFINITY;
  for (double v : e) min_e = std::min(min_e, v);
  ok = ok && min_e >= 0.0;
  detail += fmt("; min dS = %.3e", min_e);
  return {ok, detail};
}

// sum_{m<=M} C(2m,m) xi^m / (4^m m), M from the geometric remainder bound
double series_f(double xi, double tol) {
  double coeff = 1.0, power = 1.0, sum = 0.0;
  for (long m = 1;; ++m) {
    coeff *= (2.0 * m - 1.0) / (2.0 * m);
    power *= xi;
    const double term = coeff * power / m;
    sum += term;
    if (term * xi / (1.0 - xi) < tol) return sum;
  }
}

// 7. exact identities
Outcome identities() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> h0d(0.0, 2.0), ad(0.1, 1.5), wd(0.5, 4.0), phd(-kPi, kPi), bd(0.1, 10.0);
  std::uniform_int_distribution<long> nd(1, 1000);
  const IntegratorConfig cfg = rk4(2048);

  double jarzynski = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto t = build_spectrum(DriveProtocol::sinusoidal(h0d(rng), ad(rng), wd(rng), phd(rng)), 64, cfg);
    const double beta = bd(rng);
    jarzynski = std::max(jarzynski, std::abs(cgf_finite_T(t, nd(rng), cplx(0.0, beta), InverseTemperature::of(beta))));
  }

  std::uniform_real_distribution<double> xid(0.0, 0.999);
  double series = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double xi = xid(rng);
    series = std::max(series, std::abs(series_f(xi, 1e-12) + 2.0 * std::log(0.5 * (1.0 + std::sqrt(1.0 - xi)))));
  }

  double k1_rel = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto t = build_spectrum(DriveProtocol::sinusoidal(h0d(rng), ad(rng), wd(rng), 0.0), 500, cfg);
    const double h = 1e-4;
    const double deriv = -1000.0 * (cgf_asymptotic(t, h) - cgf_asymptotic(t, -h)) / (2.0 * h);
    const double k1 = cumulants_asymptotic(t, 1000).k1;
    k1_rel = std::max(k1_rel, std::abs(deriv / k1 - 1.0));
  }

  double edge = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double h0 = h0d(rng), omega = wd(rng);
    const auto e = edge_quasi_energies(build_spectrum(DriveProtocol::sinusoidal(h0, ad(rng), omega, phd(rng)), 400, cfg));
    edge = std::max(edge, std::abs(e.mu_zero - fold_quasi_energy(std::abs(h0 - 1.0), omega)) / omega);
    edge = std::max(edge, std::abs(e.mu_pi - fold_quasi_energy(std::abs(h0 + 1.0), omega)) / omega);
  }

  double rotated = 0.0;
  std::uniform_real_distribution<double> kd(0.0, kPi);
  for (int i = 0; i < 20; ++i) {
    const auto p = DriveProtocol::sinusoidal(h0d(rng), ad(rng), wd(rng), phd(rng));
    rotated = std::max(rotated, rotated_frame_check(kd(rng), p, cfg));
  }

  const bool ok = jarzynski < 1e-10 && series < 1e-8 && k1_rel < 1e-4 && edge < 1e-3 && rotated < 1e-6;
  return {ok, fmt("Jarzynski %.1e (<1e-10), series %.1e (<1e-8), K1 rel %.1e (<1e-4), edge mu %.1e*w (<1e-3), "
                  "rotated frame %.1e (<1e-6)",
                  jarzynski, series, k1_rel, edge, rotated)};
}

// 8. finite-L histogram edge at W = 3
Outcome histogram_edge() {
  const auto p = DriveProtocol::sinusoidal(1.5, 1.0, 2.0, 0.0);
  const long L = 1000;
  const double bw = 0.02;
  const auto t = build_spectrum(p, static_cast<int>(L / 2), IntegratorConfig{});
  const auto h = work_histogram_finite_L(t, PeriodCount::asymptotic(), L, bw);
  const double w_th = 3.0;
  double below = 0.0;
  for (const auto& b : h.bins) {
    if (b.lo < w_th - bw - 1e-12) below += b.probability;
  }
  const bool onset = !h.bins.empty() && std::abs(h.bins.front().lo - w_th) < 1e-9;
  const double w_hi = (2.0 + std::log(2.0)) * 1.5;
  std::vector<double> xs, ys;
  for (const auto& b : h.bins) {
    if (b.lo >= w_th - 1e-12 && b.hi <= w_hi + 1e-12) {
      xs.push_back(std::log(0.5 * (b.lo + b.hi) - w_th));
      ys.push_back(std::log(b.probability / bw));
    }
  }
  const FitResult f = fit_linear(xs, ys);
  const double expo = f.coefficients[1];
  const bool ok = below == 0.0 && onset && std::abs(expo - 0.5) <= 0.1;
  return {ok, fmt("continuum mass below %.2f = %.1e, first bin at %.4f, sqrt-fit exponent %.3f +- %.3f over [3, %.3f] "
                  "(%zu bins)",
                  w_th - bw, below, h.bins.empty() ? NAN : h.bins.front().lo, expo, f.standard_errors[1], w_hi,
                  xs.size())};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 CGF convergence (h0=1, A=1, w=2)", cgf_convergence},
      {"2 CDT suppression (w=0.3623 vs w=2)", cdt_suppression},
      {"3 case-a plateau of R(s)", case_a_plateau},
      {"4 case-b plateau of R_c(s)", case_b_plateau},
      {"5 case-c power-law exponents", case_c_exponents},
      {"6 entropy landscape", entropy_landscape},
      {"7 exact-identity suite", identities},
      {"8 finite-L histogram edge", histogram_edge},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
