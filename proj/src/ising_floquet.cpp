#include "floquet/ising_floquet.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "floquet/error.hpp"

namespace floquet {

namespace {

void require_k(double k) {
  if (!(k > 0.0 && k <= kPi)) throw InvalidArgument("wavevector must lie in (0, pi]");
}

}  // namespace

Complex2x2 mode_hamiltonian(double k, double h) {
  const double eps = h - std::cos(k);
  const double delta = std::sin(k);
  return {cplx(eps), cplx(0.0, -delta), cplx(0.0, delta), cplx(-eps)};
}

BogoliubovGround bogoliubov_ground(double k, double h_i) {
  require_k(k);
  const double eps = h_i - std::cos(k);
  const double delta = std::sin(k);
  const double e = std::hypot(eps, delta);
  // Null vector of H + E from whichever row is better conditioned.
  Vec2 g;
  if (eps >= 0.0) {
    g = {cplx(0.0, delta), cplx(eps + e)};
  } else {
    g = {cplx(e - eps), cplx(0.0, -delta)};
  }
  const double n = norm(g);
  return {g[0] / n, g[1] / n, e};
}

Complex2x2 period_propagator(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg) {
  require_k(k);
  return integrate_linear_ode(
      [&](double t) { return mode_hamiltonian(k, protocol.field(t)); }, 0.0, protocol.period(), cfg);
}

Complex2x2 rotated_period_propagator(double k, const DriveProtocol& protocol,
                                     const IntegratorConfig& cfg) {
  require_k(k);
  const double eps0 = protocol.h0() - std::cos(k);
  const double delta = std::sin(k);
  return integrate_linear_ode(
      [&](double t) {
        const cplx w = std::polar(1.0, 2.0 * protocol.field_integral(t));
        return Complex2x2{cplx(eps0), cplx(0.0, -delta) * w, cplx(0.0, delta) * std::conj(w),
                          cplx(-eps0)};
      },
      0.0, protocol.period(), cfg);
}

FloquetDecomposition floquet_decompose(const Complex2x2& u, double tau) {
  if (!(tau > 0.0)) throw InvalidArgument("period must be positive");
  // U = cos(theta) I - i sin(theta) n.sigma, so i(U - U^dag)/2 = sin(theta) n.sigma.
  const Complex2x2 ud = u.adjoint();
  const cplx i(0.0, 1.0);
  const Complex2x2 m = 0.5 * (i * (u - ud));
  const double mz = 0.5 * (m.a00.real() - m.a11.real());
  const cplx off = 0.5 * (m.a10 + std::conj(m.a01));  // mx + i my
  const double mx = off.real(), my = off.imag();
  const double s = std::sqrt(mx * mx + my * my + mz * mz);
  const double c = 0.5 * u.trace().real();
  FloquetDecomposition d;
  d.theta = std::atan2(s, c);
  d.quasi_energy = d.theta / tau;
  d.fold_boundary = kPi - d.theta < 1e-9;
  if (s < 1e-12) {
    d.degenerate = true;
    d.mode_plus = {cplx(1.0), cplx(0.0)};
    d.mode_minus = {cplx(0.0), cplx(1.0)};
    return d;
  }
  const double nx = mx / s, ny = my / s, nz = mz / s;
  Vec2 p;
  if (nz >= 0.0) {
    p = {cplx(1.0 + nz), cplx(nx, ny)};
  } else {
    p = {cplx(nx, -ny), cplx(1.0 - nz)};
  }
  const double pn = norm(p);
  p = {p[0] / pn, p[1] / pn};
  d.mode_plus = p;
  d.mode_minus = {-std::conj(p[1]), std::conj(p[0])};
  return d;
}

double overlaps(const Vec2& mode_plus, const Vec2& ground) {
  return std::clamp(std::norm(inner(mode_plus, ground)), 0.0, 1.0);
}

void assign_overlaps(ModeSolution& mode, const Vec2& mode_plus) {
  const Vec2 ground{mode.u, mode.v};
  const Vec2 mode_minus{-std::conj(mode_plus[1]), std::conj(mode_plus[0])};
  const double rp = overlaps(mode_plus, ground);
  const double rm = overlaps(mode_minus, ground);
  const double total = rp + rm;
  mode.mode_plus = mode_plus;
  mode.r_plus_sq = rp / total;
  const double r_minus = rm / total;
  mode.xi = std::clamp(4.0 * mode.r_plus_sq * r_minus, 0.0, 1.0);
  mode.imbalance = mode.r_plus_sq - r_minus;
}

ModeSolution solve_mode(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg) {
  const BogoliubovGround g = bogoliubov_ground(k, protocol.h_initial());
  const Complex2x2 u = period_propagator(k, protocol, cfg);
  const FloquetDecomposition fd = floquet_decompose(u, protocol.period());
  ModeSolution m;
  m.k = k;
  m.energy = g.energy;
  m.quasi_energy = fd.quasi_energy;
  m.u = g.u;
  m.v = g.v;
  m.degenerate = fd.degenerate;
  m.fold_boundary = fd.fold_boundary;
  assign_overlaps(m, fd.mode_plus);
  return m;
}

SpectrumTable::SpectrumTable(DriveProtocol protocol, IntegratorConfig cfg,
                             std::vector<ModeSolution> modes)
    : protocol_(std::move(protocol)), cfg_(cfg), modes_(std::move(modes)) {
  for (std::size_t j = 1; j < modes_.size(); ++j) {
    if (!(modes_[j].k > modes_[j - 1].k)) throw InvalidArgument("table k values must increase");
  }
}

SpectrumTable SpectrumTable::with_exchanged_labels() const {
  std::vector<ModeSolution> swapped = modes_;
  for (auto& m : swapped) {
    m.r_plus_sq = 1.0 - m.r_plus_sq;
    m.imbalance = -m.imbalance;
    m.mode_plus = {-std::conj(m.mode_plus[1]), std::conj(m.mode_plus[0])};
  }
  return SpectrumTable(protocol_, cfg_, std::move(swapped));
}

SpectrumTable build_spectrum(const DriveProtocol& protocol, int n_k, const IntegratorConfig& cfg,
                             int workers) {
  if (n_k < 64) throw InvalidArgument("grid.n_k must be >= 64");
  cfg.validate();
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n_k);

  std::vector<ModeSolution> modes(n_k);
  std::vector<std::exception_ptr> failures(n_k);
  auto run = [&](int first) {
    for (int j = first; j < n_k; j += workers) {
      const double k = (j + 0.5) * kPi / n_k;
      try {
        modes[j] = solve_mode(k, protocol, cfg);
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (int j = 0; j < n_k; ++j) {
    if (!failures[j]) continue;
    const double k = (j + 0.5) * kPi / n_k;
    try {
      std::rethrow_exception(failures[j]);
    } catch (const IntegrationError& e) {
      std::ostringstream msg;
      msg << "mode k=" << k << ": " << e.what();
      throw IntegrationError(msg.str(), e.achieved_error());
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "mode k=" << k << ": " << e.what();
      throw NumericalDomainError(msg.str());
    }
  }

  // Degenerate modes inherit the Floquet basis of the nearest resolved neighbour.
  const auto first_resolved =
      std::find_if(modes.begin(), modes.end(), [](const ModeSolution& m) { return !m.degenerate; });
  if (first_resolved != modes.end()) {
    const std::size_t start = static_cast<std::size_t>(first_resolved - modes.begin());
    for (std::size_t j = start; j-- > 0;) assign_overlaps(modes[j], modes[j + 1].mode_plus);
    for (std::size_t j = start + 1; j < modes.size(); ++j) {
      if (modes[j].degenerate) assign_overlaps(modes[j], modes[j - 1].mode_plus);
    }
  }
  return SpectrumTable(protocol, cfg, std::move(modes));
}

double rotated_frame_check(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg) {
  const Complex2x2 lab = period_propagator(k, protocol, cfg);
  const Complex2x2 rot = rotated_period_propagator(k, protocol, cfg);
  return (lab - rot).max_norm();
}

EdgeQuasiEnergies edge_quasi_energies(const SpectrumTable& table) {
  const auto& m = table.modes();
  if (m.size() < 3) throw InvalidArgument("edge extrapolation needs at least 3 modes");
  EdgeQuasiEnergies out;
  std::vector<double> ks, mus;
  for (std::size_t j = 0; j < 3; ++j) {
    ks.push_back(m[j].k);
    mus.push_back(m[j].quasi_energy);
  }
  FitResult lo = fit_linear(ks, mus);
  out.mu_zero = lo.coefficients[0];
  out.slope_zero = lo.coefficients[1];
  ks.clear();
  mus.clear();
  for (std::size_t j = m.size() - 3; j < m.size(); ++j) {
    ks.push_back(m[j].k - kPi);
    mus.push_back(m[j].quasi_energy);
  }
  FitResult hi = fit_linear(ks, mus);
  out.mu_pi = hi.coefficients[0];
  out.slope_pi = hi.coefficients[1];
  return out;
}

double fold_quasi_energy(double x, double omega) {
  double r = std::fmod(std::abs(x), omega);
  return std::min(r, omega - r);
}

}  // namespace floquet
