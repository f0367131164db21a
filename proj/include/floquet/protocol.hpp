#pragma once

#include <vector>

namespace floquet {

enum class ProtocolKind { sinusoidal, tabulated };

// Periodic transverse field h(t) with period tau = 2 pi / omega.
//
// Tabulated drives hold n >= 4 samples h(j tau / n), j = 0..n-1, and are
// evaluated through a periodic cubic spline.
class DriveProtocol {
 public:
  static DriveProtocol sinusoidal(double h0, double amplitude, double omega, double phase);
  static DriveProtocol tabulated(std::vector<double> samples, double omega);

  ProtocolKind kind() const { return kind_; }
  double h0() const { return h0_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }
  double phase() const { return phase_; }
  double period() const;
  double h_initial() const { return field(0.0); }
  const std::vector<double>& samples() const { return samples_; }

  double field(double t) const;
  // f(t) = integral_0^t (h(t') - h0) dt'; periodic in t.
  double field_integral(double t) const;

 private:
  DriveProtocol() = default;
  double spline_eval(double t) const;

  ProtocolKind kind_ = ProtocolKind::sinusoidal;
  double h0_ = 0.0;
  double amplitude_ = 0.0;
  double omega_ = 1.0;
  double phase_ = 0.0;
  std::vector<double> samples_;
  std::vector<double> second_derivs_;
  std::vector<double> cell_integrals_;  // prefix sums of integral of (h - h0) per cell
};

}  // namespace floquet
