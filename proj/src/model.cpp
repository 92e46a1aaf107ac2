#include "lamqed/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lamqed {

namespace {

// log|q_n| for nbar > 0.
double log_weight(double nbar, int n) {
  return -0.5 * nbar + 0.5 * n * std::log(nbar) - 0.5 * std::lgamma(n + 1.0);
}

constexpr double kTailTolerance = 1e-12;

}  // namespace

void validate(const ModelConfig& cfg) {
  if (!(cfg.lambda1 > 0.0) || !(cfg.lambda2 > 0.0))
    throw std::invalid_argument("model: coupling constants must be positive");
  if (!(cfg.nbar >= 0.0))
    throw std::invalid_argument("model: mean photon number must be >= 0");
  if (cfg.n_max < 1)
    throw std::invalid_argument("model: n_max must be >= 1");
  if (cfg.motion) {
    if (cfg.motion->p < 1)
      throw std::invalid_argument("model: motion half-wavelength count p must be >= 1");
    if (cfg.lambda1 != cfg.lambda2)
      throw std::invalid_argument(
          "model: motion requires equal couplings lambda1 == lambda2");
  }
}

int default_n_max(double nbar) {
  if (!(nbar >= 0.0))
    throw std::invalid_argument("model: mean photon number must be >= 0");
  int n_max = std::max(1, static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar + 1.0))));
  if (nbar == 0.0) return n_max;
  double mass = 0.0;
  for (int n = 0; n <= n_max; ++n) mass += std::exp(2.0 * log_weight(nbar, n));
  while (mass < 1.0 - kTailTolerance)
    mass += std::exp(2.0 * log_weight(nbar, ++n_max));
  return n_max;
}

CoherentWeights coherent_weights(double nbar, double alpha_phase, int n_max) {
  if (!(nbar >= 0.0))
    throw std::invalid_argument("coherent_weights: nbar must be >= 0");
  if (n_max < 1)
    throw std::invalid_argument("coherent_weights: n_max must be >= 1");

  CoherentWeights w;
  w.q.resize(n_max + 1);
  if (nbar == 0.0) {
    w.q[0] = 1.0;  // vacuum: q_0 = 1, all higher weights vanish
    w.mass = 1.0;
    return w;
  }

  double mass = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double mag = std::exp(log_weight(nbar, n));
    w.q[n] = std::polar(mag, alpha_phase * n);
    mass += mag * mag;
  }
  w.mass = mass;

  if (mass < 1.0 - kTailTolerance) {
    int needed = n_max;
    double extended = mass;
    while (extended < 1.0 - kTailTolerance)
      extended += std::exp(2.0 * log_weight(nbar, ++needed));
    std::ostringstream msg;
    msg << "coherent_weights: truncation inadequate for nbar = " << nbar
        << " (retained mass " << mass << ", tail above " << kTailTolerance
        << "); use n_max >= " << needed;
    throw std::invalid_argument(msg.str());
  }
  return w;
}

double mode_shape(double t, const ModelConfig& cfg) {
  if (!cfg.motion) return 1.0;
  return std::sin(cfg.motion->p * cfg.lambda1 * t);
}

double coupling(int n, int s, double t, const ModelConfig& cfg) {
  if (n < 0) throw std::invalid_argument("coupling: photon sector n must be >= 0");
  if (s != 1 && s != 2) throw std::invalid_argument("coupling: transition s must be 1 or 2");
  const double lambda = (s == 1) ? cfg.lambda1 : cfg.lambda2;
  return lambda * mode_shape(t, cfg) * std::sqrt(n + 1.0);
}

double scaled_time(double t, const ModelConfig& cfg) {
  if (!cfg.motion) return cfg.lambda1 * t;
  const int p = cfg.motion->p;
  return (1.0 - std::cos(p * cfg.lambda1 * t)) / p;
}

}  // namespace lamqed
