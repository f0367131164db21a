#pragma once

// Per-mode Bogoliubov-de Gennes problem of the driven transverse-field Ising
// chain (J = 1) on the basis {|0>, c_k^dag c_-k^dag |0>}.

#include <memory>
#include <vector>

#include "floquet/numerics.hpp"
#include "floquet/protocol.hpp"

namespace floquet {

// [[h - cos k, -i sin k], [i sin k, -(h - cos k)]]
Complex2x2 mode_hamiltonian(double k, double h);

struct BogoliubovGround {
  cplx u;
  cplx v;
  double energy = 0.0;  // E_k; the ground level of the mode sits at -E_k
};

BogoliubovGround bogoliubov_ground(double k, double h_i);

// U_k(tau, 0) in the lab frame.
Complex2x2 period_propagator(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg);

// Same propagator integrated in the frame rotated by f(t) = int_0^t (h - h0).
Complex2x2 rotated_period_propagator(double k, const DriveProtocol& protocol,
                                     const IntegratorConfig& cfg);

struct FloquetDecomposition {
  double quasi_energy = 0.0;  // mu in [0, omega/2]
  double theta = 0.0;         // mu * tau in [0, pi]
  Vec2 mode_plus{};           // eigenvalue exp(-i theta)
  Vec2 mode_minus{};          // eigenvalue exp(+i theta)
  bool degenerate = false;    // U proportional to the identity; modes are placeholders
  bool fold_boundary = false;  // theta within 1e-9 of pi
};

FloquetDecomposition floquet_decompose(const Complex2x2& u, double tau);

// |<mode|ground>|^2
double overlaps(const Vec2& mode_plus, const Vec2& ground);

struct ModeSolution {
  double k = 0.0;
  double energy = 0.0;        // E_k
  double quasi_energy = 0.0;  // mu_k
  double r_plus_sq = 0.0;
  double xi = 0.0;            // 4 |r+|^2 |r-|^2
  double imbalance = 0.0;     // |r+|^2 - |r-|^2, carries sqrt(1 - xi) at full precision
  cplx u;
  cplx v;
  Vec2 mode_plus{};
  bool degenerate = false;
  bool fold_boundary = false;

  double r_minus_sq() const { return 1.0 - r_plus_sq; }
};

// Single-mode solve; degenerate modes keep the coordinate basis until a
// neighbour fixes them (see build_spectrum).
ModeSolution solve_mode(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg);

// Overlaps of a ground state with a prescribed "+" Floquet mode.
void assign_overlaps(ModeSolution& mode, const Vec2& mode_plus);

enum class GridScheme { midpoint };

class SpectrumTable {
 public:
  SpectrumTable(DriveProtocol protocol, IntegratorConfig cfg, std::vector<ModeSolution> modes);

  const DriveProtocol& protocol() const { return protocol_; }
  const IntegratorConfig& integrator() const { return cfg_; }
  const std::vector<ModeSolution>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  GridScheme scheme() const { return GridScheme::midpoint; }
  double dk() const { return kPi / static_cast<double>(modes_.size()); }
  double h_initial() const { return protocol_.h_initial(); }

  // Copy with |r+|^2 and |r-|^2 swapped in every mode.
  SpectrumTable with_exchanged_labels() const;

 private:
  DriveProtocol protocol_;
  IntegratorConfig cfg_;
  std::vector<ModeSolution> modes_;
};

// k_j = (j - 1/2) pi / n_k. workers <= 0 selects hardware concurrency.
SpectrumTable build_spectrum(const DriveProtocol& protocol, int n_k, const IntegratorConfig& cfg,
                             int workers = 0);

// Max-norm distance between the rotated-frame and lab-frame period propagators.
double rotated_frame_check(double k, const DriveProtocol& protocol, const IntegratorConfig& cfg);

struct EdgeQuasiEnergies {
  double mu_zero = 0.0;   // linear extrapolation to k = 0
  double slope_zero = 0.0;
  double mu_pi = 0.0;     // linear extrapolation to k = pi
  double slope_pi = 0.0;
};

EdgeQuasiEnergies edge_quasi_energies(const SpectrumTable& table);

// min(x mod omega, omega - x mod omega)
double fold_quasi_energy(double x, double omega);

}  // namespace floquet
