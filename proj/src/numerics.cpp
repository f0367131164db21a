#include "floquet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floquet/error.hpp"

namespace floquet {

double Complex2x2::max_norm() const {
  return std::max({std::abs(a00), std::abs(a01), std::abs(a10), std::abs(a11)});
}

double unitarity_defect(const Complex2x2& u) {
  return (u.adjoint() * u - Complex2x2::identity()).max_norm();
}

Complex2x2 hermitian_exponential(const Complex2x2& h, double t) {
  const double c = 0.5 * (h.a00.real() + h.a11.real());
  const double nz = 0.5 * (h.a00.real() - h.a11.real());
  const double nx = h.a01.real();
  const double ny = -h.a01.imag();
  const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
  const cplx phase = std::exp(cplx(0.0, -c * t));
  const double cs = std::cos(r * t);
  // sin(r t) / r, finite as r -> 0
  const double sinc = r * t == 0.0 ? t : std::sin(r * t) / r;
  const cplx mi(0.0, -1.0);
  Complex2x2 traceless{cplx(nz), cplx(nx, -ny), cplx(nx, ny), cplx(-nz)};
  Complex2x2 out = Complex2x2::diagonal(cs, cs) + (mi * sinc) * traceless;
  return out * phase;
}

cplx inner(const Vec2& a, const Vec2& b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

double norm(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

void IntegratorConfig::validate() const {
  if (method == IntegratorMethod::rk4_fixed && steps_per_period < 16) {
    throw InvalidArgument("integrator.steps_per_period must be >= 16");
  }
  if (!(tolerance > 0.0 && tolerance <= 1e-3)) {
    throw InvalidArgument("integrator.tolerance must lie in (0, 1e-3]");
  }
  if (max_steps <= 0) throw InvalidArgument("integrator.max_steps must be positive");
}

namespace {

// dU/dt = -i H(t) U
Complex2x2 rhs(const MatrixFunction& h, double t, const Complex2x2& u) {
  return cplx(0.0, -1.0) * (h(t) * u);
}

Complex2x2 integrate_rk4(const MatrixFunction& h, double t0, double t1, int steps) {
  const double dt = (t1 - t0) / steps;
  Complex2x2 u = Complex2x2::identity();
  for (int i = 0; i < steps; ++i) {
    const double t = t0 + i * dt;
    const Complex2x2 k1 = rhs(h, t, u);
    const Complex2x2 k2 = rhs(h, t + 0.5 * dt, u + (0.5 * dt) * k1);
    const Complex2x2 k3 = rhs(h, t + 0.5 * dt, u + (0.5 * dt) * k2);
    const Complex2x2 k4 = rhs(h, t + dt, u + dt * k3);
    u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return u;
}

// Dormand-Prince 5(4) with error-per-unit-step control, so the accumulated
// error over [t0, t1] stays near `tol`.
Complex2x2 integrate_rk45(const MatrixFunction& h, double t0, double t1, double tol, long max_steps) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  double t = t0;
  double dt = span / 64.0;
  Complex2x2 u = Complex2x2::identity();
  Complex2x2 k1 = rhs(h, t, u);
  long steps = 0;
  double last_err = 0.0;
  while (t < t1) {
    if (steps >= max_steps) {
      std::ostringstream msg;
      msg << "adaptive integrator exhausted " << max_steps << " steps at t=" << t << " of [" << t0
          << ", " << t1 << "]; last error estimate " << last_err;
      throw IntegrationError(msg.str(), last_err);
    }
    if (t + dt > t1) dt = t1 - t;
    const Complex2x2 k2 = rhs(h, t + c2 * dt, u + (dt * a21) * k1);
    const Complex2x2 k3 = rhs(h, t + c3 * dt, u + dt * (a31 * k1 + a32 * k2));
    const Complex2x2 k4 = rhs(h, t + c4 * dt, u + dt * (a41 * k1 + a42 * k2 + a43 * k3));
    const Complex2x2 k5 = rhs(h, t + c5 * dt, u + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Complex2x2 k6 =
        rhs(h, t + dt, u + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Complex2x2 next = u + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Complex2x2 k7 = rhs(h, t + dt, next);
    const Complex2x2 err_vec = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = err_vec.max_norm();
    const double target = tol * std::max(dt / span, 1e-6);
    ++steps;
    last_err = err;
    if (err <= target) {
      t += dt;
      u = next;
      k1 = k7;
    }
    const double factor = err == 0.0 ? 5.0 : 0.9 * std::pow(target / err, 0.2);
    dt *= std::clamp(factor, 0.2, 5.0);
    if (t + dt * 1e-12 >= t1) break;
  }
  return u;
}

}  // namespace

Complex2x2 integrate_linear_ode(const MatrixFunction& hamiltonian, double t0, double t1,
                                const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t1 > t0)) throw InvalidArgument("integrate_linear_ode requires t1 > t0");
  Complex2x2 u = cfg.method == IntegratorMethod::rk4_fixed
                     ? integrate_rk4(hamiltonian, t0, t1, cfg.steps_per_period)
                     : integrate_rk45(hamiltonian, t0, t1, cfg.tolerance, cfg.max_steps);
  const double defect = unitarity_defect(u);
  if (!(defect < 10.0 * cfg.tolerance)) {
    std::ostringstream msg;
    msg << "propagator over [" << t0 << ", " << t1 << "] not unitary: defect " << defect
        << " exceeds 10*tolerance=" << 10.0 * cfg.tolerance
        << " (increase integrator.steps_per_period or tighten integrator.tolerance)";
    throw IntegrationError(msg.str(), defect);
  }
  return u;
}

namespace {

double bessel_series(int l, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int j = 1; j <= l; ++j) term *= half / j;
  double sum = term;
  const double q = -half * half;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * (m + l));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && m > 2) break;
  }
  return sum;
}

// Downward recurrence from a high even order, normalised with
// J_0 + 2 sum_k J_2k = 1.
double bessel_miller(int l, double x) {
  const double ax = std::abs(x);
  const int top = std::max(l, static_cast<int>(ax));
  int start = top + 30 + static_cast<int>(std::sqrt(40.0 * top));
  start += start % 2;
  double jp1 = 0.0;
  double j = 1e-300;
  double norm_sum = 0.0;
  double wanted = 0.0;
  for (int n = start; n > 0; --n) {
    const double jm1 = (2.0 * n / ax) * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      wanted *= 1e-250;
      norm_sum *= 1e-250;
    }
    if (n - 1 == l) wanted = j;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm_sum += 2.0 * j;
  }
  norm_sum += j;  // j now holds the unnormalised J_0
  if (l == 0) wanted = j;
  return wanted / norm_sum;
}

}  // namespace

double bessel_j(int l, double x) {
  if (l < 0 || l > 20 || !(std::abs(x) <= 100.0)) {
    throw InvalidArgument("bessel_j requires 0 <= l <= 20 and |x| <= 100");
  }
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  const double sign = (x < 0.0 && l % 2 == 1) ? -1.0 : 1.0;
  const double ax = std::abs(x);
  const double value = ax < 8.0 ? bessel_series(l, ax) : bessel_miller(l, ax);
  return sign * value;
}

FitResult fit_least_squares(const std::vector<std::vector<double>>& columns,
                            std::span<const double> ys) {
  const std::size_t p = columns.size();
  const std::size_t n = ys.size();
  if (p == 0 || n < p) throw InvalidArgument("least squares needs at least as many points as parameters");
  for (const auto& c : columns) {
    if (c.size() != n) throw InvalidArgument("least squares column length mismatch");
  }
  // Normal equations with Gauss-Jordan elimination; p is tiny.
  std::vector<std::vector<double>> a(p, std::vector<double>(2 * p + 1, 0.0));
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += columns[i][r] * columns[j][r];
      a[i][j] = s;
    }
    a[i][p + i] = 1.0;
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += columns[i][r] * ys[r];
    a[i][2 * p] = s;
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    const double d = a[col][col];
    double scale = 0.0;
    for (std::size_t j = 0; j < p; ++j) scale = std::max(scale, std::abs(a[col][j]));
    if (d == 0.0 || std::abs(d) < 1e-14 * scale) {
      throw InvalidArgument("degenerate regressors in least-squares fit");
    }
    for (auto& v : a[col]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < 2 * p + 1; ++j) a[r][j] -= f * a[col][j];
    }
  }
  FitResult fit;
  fit.coefficients.resize(p);
  for (std::size_t i = 0; i < p; ++i) fit.coefficients[i] = a[i][2 * p];
  double rss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double pred = 0.0;
    for (std::size_t i = 0; i < p; ++i) pred += fit.coefficients[i] * columns[i][r];
    rss += (ys[r] - pred) * (ys[r] - pred);
  }
  fit.residual_norm = std::sqrt(rss);
  const double sigma2 = n > p ? rss / static_cast<double>(n - p) : 0.0;
  fit.standard_errors.resize(p);
  for (std::size_t i = 0; i < p; ++i) fit.standard_errors[i] = std::sqrt(sigma2 * a[i][p + i]);
  return fit;
}

namespace {

void require_increasing(std::span<const double> xs, const char* what) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw InvalidArgument(std::string(what) + ": abscissae must be strictly increasing");
    }
  }
}

}  // namespace

FitResult fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("fit_linear: length mismatch");
  if (xs.size() < 3) throw InvalidArgument("fit_linear: needs at least 3 points");
  if (xs.front() == xs.back()) throw InvalidArgument("fit_linear: degenerate abscissae");
  require_increasing(xs, "fit_linear");
  std::vector<double> ones(xs.size(), 1.0);
  FitResult fit = fit_least_squares({ones, std::vector<double>(xs.begin(), xs.end())}, ys);
  fit.window_lo = xs.front();
  fit.window_hi = xs.back();
  return fit;
}

FitResult fit_power_law(std::span<const double> ss, std::span<const double> ys) {
  if (ss.size() != ys.size()) throw InvalidArgument("fit_power_law: length mismatch");
  if (ss.size() < 4) throw InvalidArgument("fit_power_law: needs at least 4 points");
  std::vector<double> ls, ly;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    if (!(ss[i] > 0.0) || !(ys[i] > 0.0)) {
      throw InvalidArgument("fit_power_law: inputs must be strictly positive");
    }
    ls.push_back(std::log(ss[i]));
    ly.push_back(std::log(ys[i]));
  }
  require_increasing(ss, "fit_power_law");
  const FitResult lin = fit_linear(ls, ly);
  FitResult fit;
  fit.coefficients = {std::exp(lin.coefficients[0]), -lin.coefficients[1]};
  fit.standard_errors = {fit.coefficients[0] * lin.standard_errors[0], lin.standard_errors[1]};
  fit.residual_norm = lin.residual_norm;
  fit.window_lo = ss.front();
  fit.window_hi = ss.back();
  return fit;
}

double romberg(const std::function<double(double)>& f, double a, double b, double rel_tol,
               int max_levels) {
  std::vector<double> prev(1), cur;
  double h = b - a;
  prev[0] = 0.5 * h * (f(a) + f(b));
  long points = 1;
  for (int level = 1; level < max_levels; ++level) {
    h *= 0.5;
    double sum = 0.0;
    for (long i = 0; i < points; ++i) sum += f(a + (2 * i + 1) * h);
    points *= 2;
    cur.assign(level + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * sum;
    double factor = 1.0;
    for (int j = 1; j <= level; ++j) {
      factor *= 4.0;
      cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    const double delta = std::abs(cur[level] - prev[level - 1]);
    if (level > 4 && delta <= rel_tol * std::max(std::abs(cur[level]), 1.0)) return cur[level];
    prev.swap(cur);
  }
  return prev.back();
}

namespace {

GaussRule make_gauss_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int n = 2; n <= order; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const std::vector<GaussRule> rules = [] {
    std::vector<GaussRule> r(65);
    for (int n = 1; n <= 64; ++n) r[n] = make_gauss_rule(n);
    return r;
  }();
  if (order < 1 || order > 64) throw InvalidArgument("gauss_legendre: order must be in [1, 64]");
  return rules[order];
}

}  // namespace floquet
