#include "floquet/work_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "floquet/error.hpp"

namespace floquet {

PeriodCount PeriodCount::periods(long n) {
  if (n < 1) throw InvalidArgument("period count must be >= 1");
  return {n, false};
}

InverseTemperature InverseTemperature::of(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive and finite");
  return {beta, false};
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kRefineThreshold = 1e-3;
constexpr int kSubSamples = 8;

double energy_at(double k, double h_i) { return std::hypot(h_i - std::cos(k), std::sin(k)); }

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void require_s(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidArgument("s must be finite and >= 0");
}

// The Laplace form <exp(-sW)> exists for every real s (W is bounded).
void require_finite_s(double s) {
  if (!std::isfinite(s)) throw InvalidArgument("s must be finite");
}

void require_length(long length) {
  if (length <= 0 || length % 2 != 0) throw InvalidArgument("chain length L must be a positive even integer");
}

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

std::vector<QuadratureNode> quadrature_nodes(const SpectrumTable& table) {
  const auto& modes = table.modes();
  const std::size_t n = modes.size();
  const double dk = table.dk();
  const double h_i = table.h_initial();
  std::vector<QuadratureNode> nodes;
  nodes.reserve(n + 64);
  for (std::size_t j = 0; j < n; ++j) {
    const ModeSolution& m = modes[j];
    if (m.imbalance * m.imbalance >= kRefineThreshold || n < 2) {
      nodes.push_back({m.k, dk, m.energy, m.xi, m.imbalance, m.quasi_energy, j});
      continue;
    }
    for (int sub = 0; sub < kSubSamples; ++sub) {
      const double k = m.k - 0.5 * dk + (sub + 0.5) * dk / kSubSamples;
      std::size_t a, b;
      if (k < m.k) {
        a = j > 0 ? j - 1 : j;
        b = j > 0 ? j : j + 1;
      } else {
        a = j + 1 < n ? j : j - 1;
        b = j + 1 < n ? j + 1 : j;
      }
      const double t = (k - modes[a].k) / (modes[b].k - modes[a].k);
      const double d = std::clamp(modes[a].imbalance + t * (modes[b].imbalance - modes[a].imbalance), -1.0, 1.0);
      const double mu = modes[a].quasi_energy + t * (modes[b].quasi_energy - modes[a].quasi_energy);
      const double xi = std::clamp((1.0 - d) * (1.0 + d), 0.0, 1.0);
      nodes.push_back({k, dk / kSubSamples, energy_at(k, h_i), xi, d, mu, j});
    }
  }
  return nodes;
}

double cgf_finite_n(const SpectrumTable& table, long n, double s) {
  require_finite_s(s);
  if (n < 1) throw InvalidArgument("period count must be >= 1");
  const double tau = table.protocol().period();
  double sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    const double sn = std::sin(q.quasi_energy * static_cast<double>(n) * tau);
    const double arg = 1.0 - q.xi * sn * sn * -std::expm1(-2.0 * s * q.energy);
    if (!(arg > 0.0)) {
      std::ostringstream msg;
      msg << "cgf_finite_n: non-positive log argument at k=" << q.k;
      throw NumericalDomainError(msg.str());
    }
    sum += q.weight * std::log(arg);
  }
  return sum / kTwoPi;
}

double cgf_asymptotic(const SpectrumTable& table, double s) {
  require_finite_s(s);
  if (s == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    const double r = std::sqrt(q.imbalance * q.imbalance + q.xi * std::exp(-2.0 * s * q.energy));
    sum += q.weight * 2.0 * std::log(0.5 * (1.0 + (s > 0.0 ? std::min(r, 1.0) : r)));
  }
  return sum / kTwoPi;
}

double fidelity_plateau(const SpectrumTable& table) {
  double sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    sum += q.weight * 2.0 * std::log(0.5 * (1.0 + std::abs(q.imbalance)));
  }
  return sum / kTwoPi;
}

namespace {

// ln of weight * exp(2 s shift) * 2 ln[(1 + sqrt(a^2 + xi e^{-2sE})) / (1 + a)] is
// log_weight + ln(xsc) + ln(2 * factor); returns the term itself.
double scaled_excess_term(double log_weight, double a, double log_a, double log_xi, double energy,
                          double energy_above_shift, double s, double shift) {
  if (log_xi == -std::numeric_limits<double>::infinity()) return 0.0;
  const double log_root = 0.5 * log_add(2.0 * log_a, log_xi - 2.0 * s * energy);
  const double log_den = log_add(log_root, log_a) + std::log1p(a);
  const double log_xsc = log_xi - 2.0 * s * energy_above_shift - log_den;
  const double x = std::exp(log_xsc - 2.0 * s * shift);
  const double factor = x < 1e-12 ? 1.0 - 0.5 * x : std::log1p(x) / x;
  return 2.0 * std::exp(log_weight + log_xsc) * factor;
}

struct ImbalanceModel {
  bool through_origin = false;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;

  // |d| and ln|d| at k = exp(log_k).
  std::pair<double, double> eval(double log_k) const {
    const double k = std::exp(log_k);
    if (through_origin) {
      const double slope = c1 + c2 * k;
      if (slope <= 0.0) return {0.0, -std::numeric_limits<double>::infinity()};
      const double a = std::min(k * slope, 1.0);
      return {a, a == 1.0 ? 0.0 : log_k + std::log(slope)};
    }
    const double a = std::clamp(c0 + c1 * k + c2 * k * k, 0.0, 1.0);
    return {a, std::log(a)};
  }
};

ImbalanceModel fit_imbalance_model(const SpectrumTable& table) {
  const auto& m = table.modes();
  std::vector<double> ks(3), as(3), ks2(3), ones(3, 1.0);
  for (int j = 0; j < 3; ++j) {
    ks[j] = m[j].k;
    ks2[j] = m[j].k * m[j].k;
    as[j] = std::abs(m[j].imbalance);
  }
  ImbalanceModel model;
  const FitResult full = fit_least_squares({ones, ks, ks2}, as);
  if (std::abs(full.coefficients[0]) < 1e-3) {
    const FitResult origin = fit_least_squares({ks, ks2}, as);
    model.through_origin = true;
    model.c1 = origin.coefficients[0];
    model.c2 = origin.coefficients[1];
  } else {
    model.c0 = full.coefficients[0];
    model.c1 = full.coefficients[1];
    model.c2 = full.coefficients[2];
  }
  return model;
}

}  // namespace

double cgf_asymptotic_excess(const SpectrumTable& table, double s, double shift) {
  require_s(s);
  if (!std::isfinite(shift)) throw InvalidArgument("shift must be finite");
  if (s == 0.0) return 0.0;
  const double h_i = table.h_initial();
  double sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    if (q.cell == 0) continue;
    const double a = std::abs(q.imbalance);
    sum += scaled_excess_term(std::log(q.weight), a, std::log(a), std::log(q.xi), q.energy,
                              q.energy - shift, s, shift);
  }

  // First cell [0, dk] in t = ln(dk / k), GL panels of unit width.
  const ImbalanceModel model = fit_imbalance_model(table);
  const GaussRule& gl = gauss_legendre(12);
  const double log_dk = std::log(table.dk());
  const double span = std::min(s * std::max(shift, 0.0) + 60.0, 1e5);
  const int panels = static_cast<int>(std::ceil(span));
  const double gap2 = (h_i - 1.0) * (h_i - 1.0) - shift * shift;
  for (int p = 0; p < panels; ++p) {
    for (int g = 0; g < 12; ++g) {
      const double t = p + 0.5 + 0.5 * gl.nodes[g];
      const double log_k = log_dk - t;
      const double k = std::exp(log_k);
      const auto [a, log_a] = model.eval(log_k);
      const double xi = (1.0 - a) * (1.0 + a);
      if (!(xi > 0.0)) continue;
      const double sh = std::sin(0.5 * k);
      const double e2 = (h_i - 1.0) * (h_i - 1.0) + 4.0 * h_i * sh * sh;
      const double energy = std::sqrt(std::max(e2, 0.0));
      const double above = (gap2 + 4.0 * h_i * sh * sh) / (energy + shift);
      // measure dk = k dt
      const double log_weight = std::log(0.5 * gl.weights[g]) + log_k;
      sum += scaled_excess_term(log_weight, a, log_a, std::log(xi), energy,
                                energy + shift > 0.0 ? above : energy - shift, s, shift);
    }
  }
  return sum / kTwoPi;
}

cplx cgf_finite_T(const SpectrumTable& table, long n, cplx u, InverseTemperature beta) {
  if (n < 1) throw InvalidArgument("period count must be >= 1");
  if (!beta.infinite && !(beta.beta > 0.0)) throw InvalidArgument("beta must be positive");
  if (u == cplx(0.0)) return 0.0;
  const double tau = table.protocol().period();
  cplx sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    const double e = q.energy;
    const double boltz = beta.infinite ? 0.0 : std::exp(-2.0 * beta.beta * e);
    const cplx e1 = std::exp(cplx(-2.0 * e * u.imag(), 2.0 * e * u.real()));
    const cplx e2 = beta.infinite ? cplx(0.0)
                                  : std::exp(cplx(2.0 * e * u.imag() - 2.0 * e * beta.beta,
                                                  -2.0 * e * u.real()));
    const cplx bracket = ((1.0 + boltz) - e1 - e2) / (1.0 + boltz);
    const double sn = std::sin(q.quasi_energy * static_cast<double>(n) * tau);
    const cplx arg = 1.0 - q.xi * sn * sn * bracket;
    if (!(std::abs(arg) > 0.0) || !std::isfinite(std::abs(arg))) {
      std::ostringstream msg;
      msg << "cgf_finite_T: per-mode factor vanishes or overflows at k=" << q.k;
      throw NumericalDomainError(msg.str());
    }
    sum += q.weight * std::log(arg);
  }
  return sum / kTwoPi;
}

CgfCurve cgf_curve(const SpectrumTable& table, PeriodCount n, std::span<const double> s_grid) {
  CgfCurve c;
  c.laplace = true;
  c.n = n;
  c.beta = InverseTemperature::zero_temperature();
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (i > 0 && !(s_grid[i] > s_grid[i - 1])) throw InvalidArgument("s grid must be increasing");
    const double s = s_grid[i];
    c.grid.push_back(s);
    c.values.emplace_back(n.infinite ? cgf_asymptotic(table, s) : cgf_finite_n(table, n.n, s));
  }
  return c;
}

CgfCurve cgf_curve_fourier(const SpectrumTable& table, long n, std::span<const double> u_grid,
                           InverseTemperature beta) {
  CgfCurve c;
  c.laplace = false;
  c.n = PeriodCount::periods(n);
  c.beta = beta;
  for (double u : u_grid) {
    c.grid.push_back(u);
    c.values.push_back(cgf_finite_T(table, n, cplx(u, 0.0), beta));
  }
  return c;
}

CumulantSet cumulants_asymptotic(const SpectrumTable& table, long length) {
  require_length(length);
  double k1 = 0.0, k2 = 0.0, k2_cgf = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    const double e2 = q.energy * q.energy;
    k1 += q.weight * q.xi * q.energy;
    k2 += q.weight * q.xi * (1.0 + 0.75 * q.xi) * e2;
    k2_cgf += q.weight * q.xi * (2.0 - 1.5 * q.xi) * e2;
  }
  const double l = static_cast<double>(length);
  return {length, l * k1 / kTwoPi, l * k2 / kTwoPi, l * k2_cgf / kTwoPi};
}

double avg_work_finite_T(const SpectrumTable& table, PeriodCount n, InverseTemperature beta,
                         long length) {
  require_length(length);
  if (!beta.infinite && !(beta.beta > 0.0)) throw InvalidArgument("beta must be positive");
  const double tau = table.protocol().period();
  double sum = 0.0;
  for (const auto& q : quadrature_nodes(table)) {
    const double osc =
        n.infinite ? 1.0 : 1.0 - std::cos(2.0 * q.quasi_energy * static_cast<double>(n.n) * tau);
    const double thermal = beta.infinite ? 1.0 : std::tanh(beta.beta * q.energy);
    sum += q.weight * osc * q.xi * q.energy * thermal;
  }
  return static_cast<double>(length) * sum / kTwoPi;
}

EntropyCurve entropy_sweep(double h0, double amplitude, std::span<const double> omegas,
                           InverseTemperature beta, long length, int n_k,
                           const IntegratorConfig& cfg, int workers) {
  if (beta.infinite || !(beta.beta > 0.0)) throw InvalidArgument("entropy sweep needs a finite beta > 0");
  require_length(length);
  for (double w : omegas) {
    if (!(w > 0.0)) throw InvalidArgument("omega grid must be positive");
  }
  EntropyCurve curve;
  curve.omega.assign(omegas.begin(), omegas.end());
  curve.entropy.assign(omegas.size(), 0.0);
  curve.beta = beta;
  curve.length = length;
  curve.h0 = h0;
  curve.amplitude = amplitude;
  curve.n_k = n_k;

  const int pool_size = std::min<int>(resolve_workers(workers), std::max<std::size_t>(omegas.size(), 1));
  std::vector<std::exception_ptr> failures(omegas.size());
  auto run = [&](int first) {
    for (std::size_t i = first; i < omegas.size(); i += pool_size) {
      try {
        const auto protocol = DriveProtocol::sinusoidal(h0, amplitude, omegas[i], 0.0);
        const auto table = build_spectrum(protocol, n_k, cfg, 1);
        curve.entropy[i] = beta.beta * avg_work_finite_T(table, PeriodCount::asymptotic(), beta, length);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (pool_size <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < pool_size; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return curve;
}

double WorkHistogram::total_probability() const {
  double total = delta0_weight;
  for (const auto& b : bins) total += b.probability;
  return total;
}

WorkHistogram work_histogram_finite_L(const SpectrumTable& table, PeriodCount n, long length,
                                      double bin_width, int workers) {
  require_length(length);
  if (length / 2 > 10000) throw InvalidArgument("exact convolution supports L/2 <= 10^4");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw InvalidArgument("bin width must be positive");

  const long n_modes = length / 2;
  std::vector<ModeSolution> modes;
  if (static_cast<long>(table.size()) == n_modes) {
    modes = table.modes();
  } else if (n_modes >= 64) {
    modes = build_spectrum(table.protocol(), static_cast<int>(n_modes), table.integrator(), workers).modes();
  } else {
    for (long j = 0; j < n_modes; ++j) {
      modes.push_back(solve_mode((j + 0.5) * kPi / n_modes, table.protocol(), table.integrator()));
    }
  }

  const double h_i = table.h_initial();
  const double threshold = 2.0 * std::abs(h_i - 1.0);
  double min_gap = std::numeric_limits<double>::infinity();
  double max_total = 0.0;
  for (const auto& m : modes) {
    min_gap = std::min(min_gap, 2.0 * m.energy);
    max_total += 2.0 * m.energy;
  }
  if (bin_width > min_gap) {
    std::ostringstream msg;
    msg << "bin width " << bin_width << " exceeds the smallest excitation 2E_k=" << min_gap
        << " and would alias the threshold";
    throw InvalidArgument(msg.str());
  }

  WorkHistogram hist;
  hist.length = length;
  hist.n = n;
  hist.bin_width = bin_width;
  hist.threshold = threshold;
  if (n.infinite) hist.approximation = "time-averaged product approximation";

  const double tau = table.protocol().period();
  auto index_of = [&](double w) { return static_cast<long>(std::floor((w - threshold) / bin_width)); };
  const long first_bin = std::max(0L, index_of(min_gap) - 1);
  const long n_bins = index_of(max_total) - first_bin + 2;
  std::vector<double> mass(n_bins, 0.0), moment(n_bins, 0.0);
  long lo = n_bins, hi = -1;  // occupied range
  double delta0 = 1.0, log_delta0 = 0.0;

  for (const auto& m : modes) {
    double p;
    if (n.infinite) {
      p = 0.5 * m.xi;
    } else {
      const double sn = std::sin(m.quasi_energy * static_cast<double>(n.n) * tau);
      p = m.xi * sn * sn;
    }
    if (p <= 0.0) continue;
    const double jump = 2.0 * m.energy;
    long new_hi = hi;
    for (long b = hi; b >= lo; --b) {
      const double mb = mass[b];
      if (mb == 0.0) continue;
      // Clamp to the bin: for subnormal masses the ratio loses all precision.
      const double edge = threshold + static_cast<double>(b + first_bin) * bin_width;
      const double pos = std::clamp(moment[b] / mb, edge, edge + bin_width) + jump;
      const long target = std::min(index_of(pos) - first_bin, n_bins - 1);
      mass[target] += p * mb;
      moment[target] += p * mb * pos;
      new_hi = std::max(new_hi, target);
      mass[b] = (1.0 - p) * mb;
      moment[b] *= (1.0 - p);
    }
    const long target = index_of(jump) - first_bin;
    mass[target] += p * delta0;
    moment[target] += p * delta0 * jump;
    lo = std::min(lo, target);
    hi = std::max(new_hi, target);
    delta0 *= (1.0 - p);
    log_delta0 += std::log1p(-p);
  }

  hist.delta0_weight = delta0;
  hist.log_delta0_weight = log_delta0;
  for (long b = lo; b <= hi; ++b) {
    if (!(mass[b] > 0.0)) continue;
    const double edge = threshold + static_cast<double>(b + first_bin) * bin_width;
    hist.bins.push_back({edge, edge + bin_width, mass[b], std::clamp(moment[b] / mass[b], edge, edge + bin_width)});
  }
  return hist;
}

}  // namespace floquet
