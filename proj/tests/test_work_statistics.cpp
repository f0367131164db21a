#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/error.hpp"
#include "floquet/work_statistics.hpp"

using namespace floquet;

namespace {

const SpectrumTable& fig1_table() {
  static const SpectrumTable t = build_spectrum(DriveProtocol::sinusoidal(1.0, 1.0, 2.0, 0.0), 600, IntegratorConfig{});
  return t;
}

// Independent midpoint sums over the raw table.
double naive_cgf_finite_n(const SpectrumTable& t, long n, double s) {
  const double tau = t.protocol().period();
  double sum = 0.0;
  for (const auto& m : t.modes()) {
    const double sn = std::sin(m.quasi_energy * n * tau);
    sum += std::log(1.0 - m.xi * sn * sn * (1.0 - std::exp(-2.0 * s * m.energy)));
  }
  return sum * t.dk() / (2.0 * kPi);
}

double naive_cgf_asymptotic(const SpectrumTable& t, double s) {
  double sum = 0.0;
  for (const auto& m : t.modes()) {
    sum += 2.0 * std::log(0.5 * (1.0 + std::sqrt(1.0 - m.xi * (1.0 - std::exp(-2.0 * s * m.energy)))));
  }
  return sum * t.dk() / (2.0 * kPi);
}

// sum_{m>=1} C(2m, m) xi^m / (4^m m), by the term recurrence.
double series_f(double xi) {
  double term = 1.0, sum = 0.0;
  for (int m = 1; m < 200000; ++m) {
    term *= xi * (2.0 * m - 1.0) / (2.0 * m);  // C(2m,m)/4^m xi^m
    const double add = term / m;
    sum += add;
    if (add < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("quadrature nodes cover [0, pi]") {
  double w = 0.0;
  for (const auto& q : quadrature_nodes(fig1_table())) w += q.weight;
  CHECK(w == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("finite-n CGF matches the naive midpoint sum") {
  for (long n : {1L, 7L}) {
    for (double s : {0.1, 1.0, 5.0}) {
      CHECK(cgf_finite_n(fig1_table(), n, s) == doctest::Approx(naive_cgf_finite_n(fig1_table(), n, s)).epsilon(1e-4));
    }
  }
  // Large n needs a grid that resolves sin(mu_k n tau) in k. At large s the
  // log singularity near xi sin^2 = 1 limits the naive sum itself.
  const auto fine = build_spectrum(fig1_table().protocol(), 9600, IntegratorConfig{});
  for (double s : {0.1, 1.0}) {
    CHECK(cgf_finite_n(fine, 250, s) == doctest::Approx(naive_cgf_finite_n(fine, 250, s)).epsilon(1e-4));
  }
  CHECK(cgf_finite_n(fig1_table(), 3, 0.0) == 0.0);
  CHECK_THROWS_AS(cgf_finite_n(fig1_table(), 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(cgf_finite_n(fig1_table(), 1, std::nan("")), InvalidArgument);
  // negative s is the Laplace transform on the other side of the origin
  CHECK(cgf_finite_n(fig1_table(), 7, -0.3) == doctest::Approx(naive_cgf_finite_n(fig1_table(), 7, -0.3)).epsilon(1e-4));
  CHECK(cgf_asymptotic(fig1_table(), -0.3) == doctest::Approx(naive_cgf_asymptotic(fig1_table(), -0.3)).epsilon(1e-4));
}

TEST_CASE("asymptotic CGF: closed form, monotone, bounded below by its plateau") {
  const auto& t = fig1_table();
  double prev = 0.0;
  for (double s : {0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0}) {
    const double g = cgf_asymptotic(t, s);
    CHECK(g == doctest::Approx(naive_cgf_asymptotic(t, s)).epsilon(1e-4));
    CHECK(g < prev);
    CHECK(g >= fidelity_plateau(t) - 1e-12);
    prev = g;
  }
  CHECK(cgf_asymptotic(t, 0.0) == 0.0);
}

TEST_CASE("excess stays consistent with the direct difference") {
  const auto& t = fig1_table();
  for (double s : {1.0, 3.0, 8.0}) {
    const double direct = cgf_asymptotic(t, s) - fidelity_plateau(t);
    CHECK(cgf_asymptotic_excess(t, s, 0.0) == doctest::Approx(direct).epsilon(1e-3));
    CHECK(cgf_asymptotic_excess(t, s, 0.5) == doctest::Approx(direct * std::exp(s)).epsilon(1e-3));
  }
}

TEST_CASE("fidelity plateau equals the series identity") {
  const auto& t = fig1_table();
  double sum = 0.0;
  for (const auto& m : t.modes()) sum -= series_f(m.xi);
  CHECK(fidelity_plateau(t) == doctest::Approx(sum * t.dk() / (2.0 * kPi)).epsilon(1e-4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(0.0, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double xi = d(rng);
    CHECK(std::abs(series_f(xi) + 2.0 * std::log(0.5 * (1.0 + std::sqrt(1.0 - xi)))) < 1e-8);
  }
}

TEST_CASE("static drive from its own ground state does no work") {
  const auto t = build_spectrum(DriveProtocol::sinusoidal(0.6, 0.0, 1.0, 0.0), 128, IntegratorConfig{});
  for (double s : {0.5, 5.0}) {
    CHECK(cgf_asymptotic(t, s) == 0.0);
    CHECK(cgf_finite_n(t, 4, s) == 0.0);
  }
  // xi is zero up to integrator rounding
  CHECK(std::abs(cumulants_asymptotic(t, 1000).k1) < 1e-20);
}

TEST_CASE("label exchange leaves every statistic bit-identical") {
  const auto& t = fig1_table();
  const auto x = t.with_exchanged_labels();
  for (double s : {0.5, 3.0}) {
    CHECK(cgf_asymptotic(t, s) == cgf_asymptotic(x, s));
    CHECK(cgf_finite_n(t, 5, s) == cgf_finite_n(x, 5, s));
  }
  CHECK(fidelity_plateau(t) == fidelity_plateau(x));
}

TEST_CASE("Jarzynski zero at u = i beta") {
  IntegratorConfig cfg;
  cfg.steps_per_period = 2048;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> h0d(0.0, 2.0), ad(0.0, 1.5), wd(0.5, 4.0), bd(0.1, 5.0);
  std::uniform_int_distribution<long> nd(1, 50);
  for (int i = 0; i < 6; ++i) {
    const auto t = build_spectrum(DriveProtocol::sinusoidal(h0d(rng), ad(rng), wd(rng), 0.0), 96, cfg);
    const double beta = bd(rng);
    const cplx g = cgf_finite_T(t, nd(rng), cplx(0.0, beta), InverseTemperature::of(beta));
    CHECK(std::abs(g) < 1e-10);
  }
}

TEST_CASE("finite-T CGF reduces to the T = 0 Laplace form") {
  const auto& t = fig1_table();
  const cplx g = cgf_finite_T(t, 9, cplx(0.0, 1.3), InverseTemperature::zero_temperature());
  CHECK(g.real() == doctest::Approx(cgf_finite_n(t, 9, 1.3)).epsilon(1e-9));
  CHECK(std::abs(g.imag()) < 1e-12);
  const cplx cold = cgf_finite_T(t, 9, cplx(0.0, 1.3), InverseTemperature::of(400.0));
  CHECK(cold.real() == doctest::Approx(g.real()).epsilon(1e-9));
}

TEST_CASE("first two cumulants are CGF derivatives") {
  const auto& t = fig1_table();
  const long L = 1000;
  const CumulantSet c = cumulants_asymptotic(t, L);
  const double h = 1e-4;
  const double k1 = -L * (cgf_asymptotic(t, h) - cgf_asymptotic(t, -h)) / (2.0 * h);
  const double h2 = 1e-3;
  const double k2 = L * (cgf_asymptotic(t, h2) + cgf_asymptotic(t, -h2)) / (h2 * h2);
  CHECK(c.k1 == doctest::Approx(k1).epsilon(1e-4));
  CHECK(c.k2_cgf == doctest::Approx(k2).epsilon(1e-3));
  double closed = 0.0;
  for (const auto& m : t.modes()) closed += m.xi * (1.0 + 0.75 * m.xi) * m.energy * m.energy;
  CHECK(c.k2 == doctest::Approx(L * closed * t.dk() / (2.0 * kPi)).epsilon(1e-4));
  CHECK(avg_work_finite_T(t, PeriodCount::asymptotic(), InverseTemperature::zero_temperature(), L) ==
        doctest::Approx(c.k1).epsilon(1e-12));
}

TEST_CASE("entropy production is non-negative and vanishes without drive") {
  const std::vector<double> w{0.7, 1.0, 2.0};
  const auto still = entropy_sweep(1.0, 0.0, w, InverseTemperature::of(10.0), 1000, 128, IntegratorConfig{});
  for (double e : still.entropy) CHECK(e == doctest::Approx(0.0).epsilon(1e-12));
  const auto driven = entropy_sweep(1.0, 1.0, w, InverseTemperature::of(10.0), 1000, 128, IntegratorConfig{});
  for (double e : driven.entropy) CHECK(e > 0.0);
  CHECK_THROWS_AS(entropy_sweep(1.0, 1.0, w, InverseTemperature::zero_temperature(), 1000, 128, IntegratorConfig{}),
                  InvalidArgument);
}

TEST_CASE("finite-L histogram conserves probability and reproduces the mean") {
  const auto p = DriveProtocol::sinusoidal(1.5, 1.0, 2.0, 0.0);
  const long L = 200;
  const auto t = build_spectrum(p, static_cast<int>(L / 2), IntegratorConfig{});
  const auto h = work_histogram_finite_L(t, PeriodCount::asymptotic(), L, 0.02);
  CHECK(h.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  double mean = 0.0, oracle = 0.0, log_d0 = 0.0;
  for (const auto& b : h.bins) {
    mean += b.probability * b.mean_work;
    CHECK(b.lo >= h.threshold - 1e-12);
  }
  for (const auto& m : t.modes()) {
    oracle += 0.5 * m.xi * 2.0 * m.energy;
    log_d0 += std::log1p(-0.5 * m.xi);
  }
  CHECK(mean == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(h.log_delta0_weight == doctest::Approx(log_d0).epsilon(1e-12));
  CHECK(h.threshold == doctest::Approx(2.0 * std::abs(p.h_initial() - 1.0)));
  CHECK_THROWS_AS(work_histogram_finite_L(t, PeriodCount::asymptotic(), 201, 0.02), InvalidArgument);
}

TEST_CASE("static drive histogram is a pure delta") {
  const auto t = build_spectrum(DriveProtocol::sinusoidal(2.0, 0.0, 1.0, 0.0), 64, IntegratorConfig{});
  const auto h = work_histogram_finite_L(t, PeriodCount::periods(3), 128, 0.05);
  // The continuum carries only integrator rounding (xi ~ 1e-27).
  CHECK(h.delta0_weight == doctest::Approx(1.0).epsilon(1e-15));
  double continuum = 0.0;
  for (const auto& b : h.bins) continuum += b.probability;
  CHECK(continuum < 1e-20);
}
