#pragma once

// Small self-contained numerical toolkit: 2x2 complex algebra, propagators of
// 2x2 linear ODEs, Bessel functions of the first kind and least-squares fits.

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace floquet {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

inline constexpr double kPi = 3.14159265358979323846;

struct Complex2x2 {
  cplx a00{1.0}, a01{0.0}, a10{0.0}, a11{1.0};

  static constexpr Complex2x2 identity() { return {}; }
  static constexpr Complex2x2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static Complex2x2 diagonal(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }

  cplx trace() const { return a00 + a11; }
  cplx determinant() const { return a00 * a11 - a01 * a10; }
  Complex2x2 adjoint() const {
    return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
  }
  // Largest entry modulus.
  double max_norm() const;

  Vec2 apply(const Vec2& v) const { return {a00 * v[0] + a01 * v[1], a10 * v[0] + a11 * v[1]}; }

  Complex2x2& operator+=(const Complex2x2& o) {
    a00 += o.a00; a01 += o.a01; a10 += o.a10; a11 += o.a11;
    return *this;
  }
  Complex2x2& operator-=(const Complex2x2& o) {
    a00 -= o.a00; a01 -= o.a01; a10 -= o.a10; a11 -= o.a11;
    return *this;
  }
  Complex2x2& operator*=(cplx s) {
    a00 *= s; a01 *= s; a10 *= s; a11 *= s;
    return *this;
  }
};

inline Complex2x2 operator+(Complex2x2 a, const Complex2x2& b) { return a += b; }
inline Complex2x2 operator-(Complex2x2 a, const Complex2x2& b) { return a -= b; }
inline Complex2x2 operator*(Complex2x2 a, cplx s) { return a *= s; }
inline Complex2x2 operator*(cplx s, Complex2x2 a) { return a *= s; }
inline Complex2x2 operator*(double s, Complex2x2 a) { return a *= cplx(s); }
inline Complex2x2 operator*(const Complex2x2& a, const Complex2x2& b) {
  return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
          a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

// ||U^dagger U - I||_inf (max entry modulus).
double unitarity_defect(const Complex2x2& u);
inline bool is_unitary(const Complex2x2& u, double tol) { return unitarity_defect(u) < tol; }

// exp(-i H t) for a Hermitian 2x2 H, computed in closed form.
Complex2x2 hermitian_exponential(const Complex2x2& h, double t);

cplx inner(const Vec2& a, const Vec2& b);  // <a|b>
double norm(const Vec2& v);

enum class IntegratorMethod { rk4_fixed, rk45_adaptive };

struct IntegratorConfig {
  IntegratorMethod method = IntegratorMethod::rk4_fixed;
  // Fixed-step mode: number of RK4 steps spanning [t0, t1] (one drive period
  // in every caller of this library).
  int steps_per_period = 512;
  // Adaptive mode: per-step error target. Both modes require the returned
  // propagator to be unitary within 10 * tolerance.
  double tolerance = 1e-8;
  long max_steps = 10'000'000;

  // Throws InvalidArgument when a field is out of range.
  void validate() const;
};

using MatrixFunction = std::function<Complex2x2(double)>;

// Propagator U(t1, t0) of i dU/dt = H(t) U with U(t0, t0) = I.
Complex2x2 integrate_linear_ode(const MatrixFunction& hamiltonian, double t0, double t1,
                                const IntegratorConfig& cfg);

// Bessel function of the first kind J_l(x). Valid for 0 <= l <= 20, |x| <= 100.
double bessel_j(int l, double x);

struct FitResult {
  // Linear fit: {intercept, slope}. Power law: {amplitude D, exponent b} of D / s^b.
  // Through-origin quadratic: {c} of y = c x^2.
  std::vector<double> coefficients;
  // Standard errors matching `coefficients` (from residual variance).
  std::vector<double> standard_errors;
  double residual_norm = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

FitResult fit_linear(std::span<const double> xs, std::span<const double> ys);
FitResult fit_power_law(std::span<const double> ss, std::span<const double> ys);

// Generic dense least squares with column regressors (normal equations, small p).
FitResult fit_least_squares(const std::vector<std::vector<double>>& columns,
                            std::span<const double> ys);

// Romberg quadrature of f over [a, b] to relative accuracy `rel_tol`.
double romberg(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13,
               int max_levels = 20);

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

}  // namespace floquet
