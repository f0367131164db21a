#include <cmath>
#include <random>

#include "doctest.h"
#include "floquet/error.hpp"
#include "floquet/ising_floquet.hpp"

using namespace floquet;

namespace {

IntegratorConfig fine() {
  IntegratorConfig cfg;
  cfg.steps_per_period = 2048;
  return cfg;
}

// Midpoint time slicing with exact per-slice exponentials.
Complex2x2 sliced_propagator(double k, const DriveProtocol& p, int slices) {
  const double dt = p.period() / slices;
  Complex2x2 u;
  for (int j = 0; j < slices; ++j) {
    u = hermitian_exponential(mode_hamiltonian(k, p.field((j + 0.5) * dt)), dt) * u;
  }
  return u;
}

double gap(double k, double h) { return std::hypot(h - std::cos(k), std::sin(k)); }

}  // namespace

TEST_CASE("Bogoliubov ground state is the lower eigenvector") {
  for (double h : {0.0, 0.5, 1.0, 1.7, 2.5}) {
    for (double k : {1e-4, 0.3, 1.5, 3.1}) {
      const auto g = bogoliubov_ground(k, h);
      CHECK(g.energy == doctest::Approx(gap(k, h)).epsilon(1e-14));
      const Vec2 psi{g.u, g.v};
      const Vec2 hpsi = mode_hamiltonian(k, h).apply(psi);
      CHECK(std::abs(hpsi[0] + g.energy * psi[0]) < 1e-13);
      CHECK(std::abs(hpsi[1] + g.energy * psi[1]) < 1e-13);
      CHECK(norm(psi) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("period propagator agrees with time slicing") {
  const auto p = DriveProtocol::sinusoidal(1.3, 1.0, 2.0, 0.4);
  for (double k : {0.05, 0.9, 2.7}) {
    const Complex2x2 ref = sliced_propagator(k, p, 1 << 12);
    CHECK((period_propagator(k, p, fine()) - ref).max_norm() < 1e-5);
  }
}

TEST_CASE("tabulated drive reproduces a sampled sinusoid") {
  std::vector<double> samples(256);
  const double omega = 1.5;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    samples[j] = 0.8 + 0.6 * std::cos(2.0 * kPi * static_cast<double>(j) / samples.size());
  }
  const auto tab = DriveProtocol::tabulated(samples, omega);
  const auto sine = DriveProtocol::sinusoidal(0.8, 0.6, omega, 0.0);
  CHECK(tab.h0() == doctest::Approx(0.8).epsilon(1e-10));
  for (double t = 0.0; t < tab.period(); t += 0.17) {
    CHECK(std::abs(tab.field(t) - sine.field(t)) < 1e-7);
    CHECK(std::abs(tab.field_integral(t) - sine.field_integral(t)) < 1e-7);
  }
  CHECK((period_propagator(0.7, tab, fine()) - period_propagator(0.7, sine, fine())).max_norm() < 1e-6);
  CHECK_THROWS_AS(DriveProtocol::tabulated({1.0, 2.0, 3.0}, 1.0), InvalidArgument);
}

TEST_CASE("Floquet decomposition recovers eigenphases") {
  const auto p = DriveProtocol::sinusoidal(0.7, 1.2, 1.7, 0.0);
  const Complex2x2 u = period_propagator(1.1, p, fine());
  const auto d = floquet_decompose(u, p.period());
  CHECK(d.theta >= 0.0);
  CHECK(d.theta <= kPi);
  CHECK(d.quasi_energy == doctest::Approx(d.theta / p.period()));
  const Vec2 up = u.apply(d.mode_plus);
  const cplx lam = std::exp(cplx(0.0, -d.theta));
  CHECK(std::abs(up[0] - lam * d.mode_plus[0]) < 1e-10);
  CHECK(std::abs(up[1] - lam * d.mode_plus[1]) < 1e-10);
  CHECK(std::abs(inner(d.mode_plus, d.mode_minus)) < 1e-10);
}

TEST_CASE("static drive: quasi-energy is the folded gap and the initial state is stationary") {
  const auto p = DriveProtocol::sinusoidal(1.6, 0.0, 2.0, 0.0);
  const auto table = build_spectrum(p, 128, fine(), 2);
  for (const auto& m : table.modes()) {
    CHECK(m.quasi_energy == doctest::Approx(fold_quasi_energy(m.energy, 2.0)).epsilon(1e-9));
    CHECK(m.xi < 1e-12);
  }
}

TEST_CASE("spectrum grid, determinism and label exchange") {
  const auto p = DriveProtocol::sinusoidal(1.0, 1.0, 2.0, 0.0);
  const auto a = build_spectrum(p, 200, IntegratorConfig{}, 1);
  const auto b = build_spectrum(p, 200, IntegratorConfig{}, 4);
  REQUIRE(a.size() == 200);
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto& x = a.modes()[j];
    const auto& y = b.modes()[j];
    CHECK(x.k == doctest::Approx((j + 0.5) * kPi / 200.0).epsilon(1e-15));
    CHECK(x.r_plus_sq == y.r_plus_sq);
    CHECK(x.quasi_energy == y.quasi_energy);
    CHECK(x.xi == doctest::Approx(4.0 * x.r_plus_sq * x.r_minus_sq()).epsilon(1e-12));
    CHECK(x.imbalance == doctest::Approx(2.0 * x.r_plus_sq - 1.0).epsilon(1e-9));
    CHECK(x.xi >= 0.0);
    CHECK(x.xi <= 1.0);
  }
  const auto swapped = a.with_exchanged_labels();
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(swapped.modes()[j].xi == a.modes()[j].xi);
    CHECK(swapped.modes()[j].r_plus_sq == doctest::Approx(1.0 - a.modes()[j].r_plus_sq));
  }
  CHECK_THROWS_AS(build_spectrum(p, 63, IntegratorConfig{}), InvalidArgument);
}

TEST_CASE("edge quasi-energies fold |h0 -+ 1|") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> h0d(0.0, 2.5), ad(0.1, 1.5), wd(0.5, 4.0);
  for (int i = 0; i < 5; ++i) {
    const double h0 = h0d(rng), omega = wd(rng);
    const auto p = DriveProtocol::sinusoidal(h0, ad(rng), omega, 0.0);
    const auto e = edge_quasi_energies(build_spectrum(p, 400, fine()));
    CHECK(std::abs(e.mu_zero - fold_quasi_energy(std::abs(h0 - 1.0), omega)) < 1e-3 * omega);
    CHECK(std::abs(e.mu_pi - fold_quasi_energy(std::abs(h0 + 1.0), omega)) < 1e-3 * omega);
  }
}

TEST_CASE("rotated-frame propagator matches the lab frame") {
  const auto p = DriveProtocol::sinusoidal(0.4, 1.1, 0.9, 0.3);
  for (double k : {0.2, 1.4, 2.9}) CHECK(rotated_frame_check(k, p, fine()) < 1e-6);
}
