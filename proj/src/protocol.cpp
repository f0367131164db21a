#include "floquet/protocol.hpp"

#include <cmath>

#include "floquet/error.hpp"
#include "floquet/numerics.hpp"

namespace floquet {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

}  // namespace

DriveProtocol DriveProtocol::sinusoidal(double h0, double amplitude, double omega, double phase) {
  require_finite(h0, "h0");
  require_finite(amplitude, "amplitude");
  require_finite(phase, "phase");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be positive");
  DriveProtocol p;
  p.kind_ = ProtocolKind::sinusoidal;
  p.h0_ = h0;
  p.amplitude_ = amplitude;
  p.omega_ = omega;
  p.phase_ = phase;
  return p;
}

DriveProtocol DriveProtocol::tabulated(std::vector<double> samples, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be positive");
  if (samples.size() < 4) throw InvalidArgument("tabulated protocol needs at least 4 samples");
  for (double s : samples) require_finite(s, "tabulated sample");
  DriveProtocol p;
  p.kind_ = ProtocolKind::tabulated;
  p.omega_ = omega;
  p.samples_ = std::move(samples);

  const std::size_t n = p.samples_.size();
  const double h = p.period() / static_cast<double>(n);
  const auto& y = p.samples_;
  std::vector<double> rhs(n), m(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = 6.0 / (h * h) * (y[(i + n - 1) % n] - 2.0 * y[i] + y[(i + 1) % n]);
  }
  // Cyclic (1, 4, 1) system; strictly diagonally dominant, Gauss-Seidel converges fast.
  for (int it = 0; it < 500; ++it) {
    double change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = (rhs[i] - m[(i + n - 1) % n] - m[(i + 1) % n]) / 4.0;
      change = std::max(change, std::abs(next - m[i]));
      scale = std::max(scale, std::abs(next));
      m[i] = next;
    }
    if (change <= 1e-16 * std::max(scale, 1e-300)) break;
  }
  p.second_derivs_ = std::move(m);

  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t0 = j * h;
    total += romberg([&p](double t) { return p.spline_eval(t); }, t0, t0 + h, 1e-15, 12);
  }
  p.h0_ = total / p.period();

  p.cell_integrals_.assign(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double cell = h * (0.5 * (y[j] + y[(j + 1) % n]) -
                             h * h / 24.0 * (p.second_derivs_[j] + p.second_derivs_[(j + 1) % n]));
    p.cell_integrals_[j + 1] = p.cell_integrals_[j] + cell - p.h0_ * h;
  }
  p.amplitude_ = 0.0;
  for (double s : p.samples_) p.amplitude_ = std::max(p.amplitude_, std::abs(s - p.h0_));
  return p;
}

double DriveProtocol::period() const { return 2.0 * kPi / omega_; }

double DriveProtocol::spline_eval(double t) const {
  const std::size_t n = samples_.size();
  const double tau = period();
  double x = std::fmod(t, tau);
  if (x < 0.0) x += tau;
  const double h = tau / static_cast<double>(n);
  std::size_t j = static_cast<std::size_t>(x / h);
  if (j >= n) j = n - 1;
  const double b = (x - j * h) / h;
  const double a = 1.0 - b;
  const std::size_t j1 = (j + 1) % n;
  return a * samples_[j] + b * samples_[j1] +
         ((a * a * a - a) * second_derivs_[j] + (b * b * b - b) * second_derivs_[j1]) * h * h / 6.0;
}

double DriveProtocol::field(double t) const {
  if (kind_ == ProtocolKind::sinusoidal) return h0_ + amplitude_ * std::cos(omega_ * t + phase_);
  return spline_eval(t);
}

double DriveProtocol::field_integral(double t) const {
  if (kind_ == ProtocolKind::sinusoidal) {
    return amplitude_ / omega_ * (std::sin(omega_ * t + phase_) - std::sin(phase_));
  }
  const std::size_t n = samples_.size();
  const double tau = period();
  double x = std::fmod(t, tau);
  if (x < 0.0) x += tau;
  const double h = tau / static_cast<double>(n);
  std::size_t j = static_cast<std::size_t>(x / h);
  if (j >= n) j = n - 1;
  const std::size_t j1 = (j + 1) % n;
  const double b = (x - j * h) / h;
  const double mj = second_derivs_[j], mj1 = second_derivs_[j1];
  const double one_minus = 1.0 - b;
  const double partial =
      h * (samples_[j] * (b - 0.5 * b * b) + samples_[j1] * 0.5 * b * b +
           h * h / 6.0 *
               (mj * ((1.0 - std::pow(one_minus, 4)) / 4.0 - (b - 0.5 * b * b)) +
                mj1 * (std::pow(b, 4) / 4.0 - 0.5 * b * b)));
  return cell_integrals_[j] + partial - h0_ * (x - j * h);
}

}  // namespace floquet
