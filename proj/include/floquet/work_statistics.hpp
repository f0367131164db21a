#pragma once

// Work statistics at stroboscopic times built from a SpectrumTable. All
// k-integrals are (1/2pi) int_0^pi dk, evaluated on the table's midpoint grid.

#include <span>
#include <string>
#include <vector>

#include "floquet/ising_floquet.hpp"

namespace floquet {

// Number of drive periods n, or the n -> infinity (time-averaged) limit.
struct PeriodCount {
  long n = 1;
  bool infinite = false;

  static PeriodCount periods(long n);
  static PeriodCount asymptotic() { return {0, true}; }
};

// Inverse temperature; `infinite` is the exact T = 0 branch (f_k = 0).
struct InverseTemperature {
  double beta = 0.0;
  bool infinite = true;

  static InverseTemperature zero_temperature() { return {0.0, true}; }
  static InverseTemperature of(double beta);
};

// One quadrature node of the k-integral. Cells where 1 - xi < 1e-3 are split
// into 8 sub-nodes with linearly interpolated imbalance and quasi-energy.
struct QuadratureNode {
  double k = 0.0;
  double weight = 0.0;     // dk share, without the 1/2pi
  double energy = 0.0;
  double xi = 0.0;
  double imbalance = 0.0;  // signed |r+|^2 - |r-|^2
  double quasi_energy = 0.0;
  std::size_t cell = 0;
};

std::vector<QuadratureNode> quadrature_nodes(const SpectrumTable& table);

// ln G_{n tau}(is) / L at T = 0.
double cgf_finite_n(const SpectrumTable& table, long n, double s);

// Stationary ln G_inf(is) / L.
double cgf_asymptotic(const SpectrumTable& table, double s);

// g_inf = lim_{s -> inf} cgf_asymptotic = 2 int ln[(1 + |r+^2 - r-^2|)/2].
double fidelity_plateau(const SpectrumTable& table);

// exp(2 s shift) * (cgf_asymptotic(s) - g_inf), evaluated without forming the
// difference. The first grid cell is integrated on a log-k mesh with the
// imbalance continued from the three smallest k, so the k -> 0 structure at
// scales far below the grid spacing is kept.
double cgf_asymptotic_excess(const SpectrumTable& table, double s, double shift);

// ln G_{n tau}(u) / L at inverse temperature beta; u may be complex
// (u = i beta is the Jarzynski point).
cplx cgf_finite_T(const SpectrumTable& table, long n, cplx u, InverseTemperature beta);

struct CgfCurve {
  std::vector<double> grid;  // s (Laplace) or u (Fourier)
  std::vector<cplx> values;
  bool laplace = true;
  PeriodCount n;
  InverseTemperature beta;
};

// T = 0 Laplace curve: finite n or the asymptotic limit.
CgfCurve cgf_curve(const SpectrumTable& table, PeriodCount n, std::span<const double> s_grid);
// Fourier curve at real u.
CgfCurve cgf_curve_fourier(const SpectrumTable& table, long n, std::span<const double> u_grid,
                           InverseTemperature beta);

struct CumulantSet {
  long length = 0;
  double k1 = 0.0;
  double k2 = 0.0;      // closed form L int xi (1 + 3 xi / 4) E^2
  double k2_cgf = 0.0;  // second s-derivative of ln G_inf(is): L int xi (2 - 3 xi / 2) E^2
  double k1_density() const { return k1 / static_cast<double>(length); }
  double k2_density() const { return k2 / static_cast<double>(length); }
};

CumulantSet cumulants_asymptotic(const SpectrumTable& table, long length);

// <W> after n periods (or n -> inf) from a thermal initial state.
double avg_work_finite_T(const SpectrumTable& table, PeriodCount n, InverseTemperature beta,
                         long length);

struct EntropyCurve {
  std::vector<double> omega;
  std::vector<double> entropy;  // beta <W>_inf for the chain of length L
  InverseTemperature beta;
  long length = 0;
  double h0 = 1.0;
  double amplitude = 1.0;
  int n_k = 0;
};

// h(t) = h0 + A cos(omega t) swept over omega; one spectrum per grid point.
EntropyCurve entropy_sweep(double h0, double amplitude, std::span<const double> omegas,
                           InverseTemperature beta, long length, int n_k,
                           const IntegratorConfig& cfg, int workers = 0);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  double probability = 0.0;
  double mean_work = 0.0;  // probability-weighted position inside the bin
};

struct WorkHistogram {
  long length = 0;
  PeriodCount n;
  double bin_width = 0.0;
  double threshold = 0.0;  // 2 |h_i - 1|, always a bin edge
  double delta0_weight = 0.0;
  double log_delta0_weight = 0.0;
  std::vector<HistogramBin> bins;  // only bins with positive mass
  std::string approximation;       // set for the n -> inf product form

  double total_probability() const;
};

// Exact finite-L distribution: convolution over the L/2 antiperiodic modes
// k = (2j - 1) pi / L of two-point laws {0, 2 E_k} with weights
// p_k = xi_k sin^2(mu_k n tau), or xi_k / 2 for n -> inf.
WorkHistogram work_histogram_finite_L(const SpectrumTable& table, PeriodCount n, long length,
                                      double bin_width, int workers = 0);

}  // namespace floquet
