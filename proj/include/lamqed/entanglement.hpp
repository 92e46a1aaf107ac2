#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "lamqed/model.hpp"
#include "lamqed/solvers.hpp"

// Reduced atomic density matrix, its eigenvalues via the trigonometric
// cubic, and the von Neumann entropy S = -Tr(rho ln rho). For the pure
// joint state the field and atomic entropies coincide, so the atomic side
// is the entanglement measure.

namespace lamqed {

struct AtomDensityMatrix {
  std::array<std::array<std::complex<double>, 3>, 3> m{};

  std::complex<double>& operator()(int r, int c) { return m[r][c]; }
  const std::complex<double>& operator()(int r, int c) const { return m[r][c]; }

  double trace_real() const {
    return m[0][0].real() + m[1][1].real() + m[2][2].real();
  }
};

// Partial trace over the field. Level 1 rides Fock state |n>, levels 2 and
// 3 ride |n+1>, so the 1-2 and 1-3 coherences couple adjacent photon
// sectors. The result is renormalized by its trace, which absorbs the
// truncated tail mass.
AtomDensityMatrix reduced_density(const JointState& state);

// Eigenvalues of the density matrix, descending, clamped to [0, 1].
struct EntropyEigenvalues {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
};

// Roots of xi^3 - xi^2 + B xi + C = 0 (B, C from the matrix invariants)
// via the trigonometric method, with R = sqrt(1/9 - B/3) >= 0. A maximally
// mixed matrix (R below noise) short-circuits to (1/3, 1/3, 1/3). Throws
// std::domain_error when an eigenvalue falls outside [-1e-6, 1 + 1e-6],
// which signals upstream truncation failure.
EntropyEigenvalues entropy_eigenvalues(const AtomDensityMatrix& rho);

// S = -sum xi ln xi with 0 ln 0 = 0; lies in [0, ln 3].
double von_neumann_entropy(const EntropyEigenvalues& xi);

// Real diagonal (rho11, rho22, rho33); sums to 1.
std::array<double, 3> populations(const AtomDensityMatrix& rho);

struct TimeSeriesSample {
  double t = 0.0;
  double scaled_time = 0.0;
  double entropy = 0.0;
  double rho11 = 0.0;
  double rho22 = 0.0;
  double rho33 = 0.0;
};

struct TimeSeries {
  SolverChoice path = SolverChoice::Resonant;
  std::vector<TimeSeriesSample> samples;
};

// Full pipeline: solve every photon sector on t_grid (sectors run in
// parallel), assemble rho at each sample, record entropy and populations.
TimeSeries entropy_series(const ModelConfig& cfg, std::span<const double> t_grid);

}  // namespace lamqed
