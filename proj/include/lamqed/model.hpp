#pragma once

#include <complex>
#include <optional>
#include <vector>

// Physical parameters of a three-level lambda atom coupled to one cavity
// mode, plus the pure functions derived from them: coherent-state weights,
// the standing-wave mode shape seen by a moving atom, and the per-sector
// coupling strengths. Everything here is immutable after construction and
// safe to share across threads.

namespace lamqed {

// Classical motion of the atom through the cavity standing wave. p counts
// the half-wavelengths of the mode inside the cavity.
struct Motion {
  int p = 1;
};

struct ModelConfig {
  double lambda1 = 1.0;  // coupling of the 1<->2 transition [1/time]
  double lambda2 = 1.0;  // coupling of the 1<->3 transition [1/time]
  double delta1 = 0.0;   // detuning of the 1<->2 transition [1/time]
  double delta2 = 0.0;   // detuning of the 1<->3 transition [1/time]
  std::optional<Motion> motion;
  double nbar = 0.0;        // mean photon number of the initial coherent field
  double alpha_phase = 0.0; // phase of the coherent amplitude alpha [rad]
  int n_max = 1;            // Fock truncation: photon sectors n = 0..n_max
};

// Throws std::invalid_argument when a parameter is out of range. Motion
// requires lambda1 == lambda2: the mode shape sin(p*lambda*t) carries a
// single coupling-derived velocity, so unequal couplings would make it
// ambiguous.
void validate(const ModelConfig& cfg);

// Smallest truncation that keeps the neglected coherent-state tail mass
// below 1e-12, starting from ceil(nbar + 10*sqrt(nbar + 1)).
int default_n_max(double nbar);

// Coherent-state expansion coefficients q_n = exp(-nbar/2) alpha^n/sqrt(n!)
// with |alpha|^2 = nbar, evaluated in log space. `mass` is the retained
// sum of |q_n|^2.
struct CoherentWeights {
  std::vector<std::complex<double>> q;
  double mass = 0.0;
};

// Throws std::invalid_argument when the truncation is inadequate (tail mass
// above 1e-12); the message names the n_max that would suffice.
CoherentWeights coherent_weights(double nbar, double alpha_phase, int n_max);

// Probability amplitudes of one photon sector: atom in level 1 with n
// photons, or level 2/3 with n+1 photons.
struct AmplitudeTriple {
  std::complex<double> psi1{};
  std::complex<double> psi2{};
  std::complex<double> psi3{};

  double norm_sq() const {
    return std::norm(psi1) + std::norm(psi2) + std::norm(psi3);
  }
};

// Full atom-field state at one instant.
struct JointState {
  double t = 0.0;
  std::vector<AmplitudeTriple> triples;  // indexed by photon sector n
  CoherentWeights weights;
};

// 1 for a stationary atom, sin(p*lambda1*t) when the atom rides through the
// standing wave.
double mode_shape(double t, const ModelConfig& cfg);

// f_s(n,t) = lambda_s * g(t) * sqrt(n+1) for transition s in {1,2}.
double coupling(int n, int s, double t, const ModelConfig& cfg);

// Plot abscissa: lambda1*t when stationary, (1 - cos(p*lambda1*t))/p with
// motion.
double scaled_time(double t, const ModelConfig& cfg);

}  // namespace lamqed
