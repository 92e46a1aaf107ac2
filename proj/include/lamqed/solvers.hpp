#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "lamqed/model.hpp"

// Per-sector amplitude solvers. Each photon sector n evolves independently
// under
//
//   i d/dt (psi1, psi2, psi3) = M(t) (psi1, psi2, psi3),
//   M(t) = [[0, F1, F2], [conj(F1), 0, 0], [conj(F2), 0, 0]],
//   F_s  = f_s(n,t) exp(-i delta_s t),
//
// from psi(0) = (1, 0, 0). Three closed forms cover the stationary atom;
// the adaptive integrator covers the moving atom and doubles as the
// correctness oracle for the closed forms.

namespace lamqed {

enum class SolverChoice { Resonant, EqualDetuning, GeneralAnalytic, NumericODE };

std::string_view to_string(SolverChoice choice);

// Real roots of mu^3 + x1 mu^2 + x2 mu + x3 = 0, descending. Inputs must
// describe a cubic with three real roots (true for any characteristic
// polynomial of a Hermitian matrix); otherwise throws std::invalid_argument
// naming the discriminant.
struct CubicRealRoots {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double discriminant = 0.0;
};

CubicRealRoots cubic_roots_trig(double x1, double x2, double x3);

// Right-hand side -i M(t) psi of the sector equation.
AmplitudeTriple ode_rhs(double t, const AmplitudeTriple& psi, int n,
                        const ModelConfig& cfg);

// Adaptive RK 8(5,3) integration from psi(0) = (1,0,0), sampled at every
// t_grid entry (grid must be nondecreasing and start at 0). Relative
// tolerance 1e-10, absolute 1e-12. The norm is never renormalized: its
// drift is a diagnostic, not something to hide.
std::vector<AmplitudeTriple> integrate_sector(int n, const ModelConfig& cfg,
                                              std::span<const double> t_grid);

// delta1 = delta2 = 0. Works for the moving atom too: the resonant matrix
// commutes with itself at all times, so the motion only reparametrizes time
// as Theta(t) = (1 - cos(p lambda t))/(p lambda).
AmplitudeTriple solve_resonant(int n, const ModelConfig& cfg, double t);

// delta1 = delta2 = Delta, stationary atom.
AmplitudeTriple solve_equal_detuning(int n, const ModelConfig& cfg, double t);

// Arbitrary detunings, stationary atom: three-exponential form built from
// the real cubic roots mu_j. Nearly degenerate roots fall back to the
// integrator.
AmplitudeTriple solve_general(int n, const ModelConfig& cfg, double t);

// Total dispatch over the configuration space.
SolverChoice choose_solver(const ModelConfig& cfg);

struct SectorTrajectory {
  SolverChoice path = SolverChoice::Resonant;
  std::vector<AmplitudeTriple> psi;  // one entry per t_grid point
};

SectorTrajectory solve_sector(int n, const ModelConfig& cfg,
                              std::span<const double> t_grid);

}  // namespace lamqed
