#include "lamqed/entanglement.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <thread>

namespace lamqed {

namespace {

using Cd = std::complex<double>;

// Runs fn(0..count-1) across hardware threads; each index writes only its
// own slot, so results are deterministic.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const unsigned hw = std::thread::hardware_concurrency();
  if (count < 2 || hw < 2) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const unsigned threads = std::min<unsigned>(hw, count);
  pool.reserve(threads - 1);
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace

AtomDensityMatrix reduced_density(const JointState& state) {
  const auto& q = state.weights.q;
  const auto& psi = state.triples;
  if (psi.size() != q.size())
    throw std::invalid_argument(
        "reduced_density: one amplitude triple per coherent weight required");
  if (psi.empty())
    throw std::invalid_argument("reduced_density: empty state");

  double r11 = 0.0, r22 = 0.0, r33 = 0.0;
  Cd r23{}, r12{}, r13{};
  const std::size_t count = psi.size();
  for (std::size_t n = 0; n < count; ++n) {
    const double w = std::norm(q[n]);
    r11 += w * std::norm(psi[n].psi1);
    r22 += w * std::norm(psi[n].psi2);
    r33 += w * std::norm(psi[n].psi3);
    r23 += w * psi[n].psi2 * std::conj(psi[n].psi3);
    if (n + 1 < count) {
      const Cd cross = q[n + 1] * std::conj(q[n]) * psi[n + 1].psi1;
      r12 += cross * std::conj(psi[n].psi2);
      r13 += cross * std::conj(psi[n].psi3);
    }
  }

  const double trace = r11 + r22 + r33;
  if (!std::isfinite(trace) || !(trace > 0.0))
    throw std::runtime_error("reduced_density: non-finite or vanishing amplitudes");

  AtomDensityMatrix rho;
  rho(0, 0) = r11 / trace;
  rho(1, 1) = r22 / trace;
  rho(2, 2) = r33 / trace;
  rho(0, 1) = r12 / trace;
  rho(0, 2) = r13 / trace;
  rho(1, 2) = r23 / trace;
  rho(1, 0) = std::conj(rho(0, 1));
  rho(2, 0) = std::conj(rho(0, 2));
  rho(2, 1) = std::conj(rho(1, 2));
  return rho;
}

EntropyEigenvalues entropy_eigenvalues(const AtomDensityMatrix& rho) {
  // The trigonometric root formula for xi^3 - xi^2 + B xi + C is evaluated
  // through the traceless part m = rho - I/3 in extended precision:
  //   R^2 = ||m||_F^2 / 6   (a sum of non-negative terms, so the maximally
  //                          mixed corner cannot cancel catastrophically)
  //   q   = -det(m) / 2     (identical to -1/27 + B/6 + C/2)
  // Near a degenerate eigenvalue pair the coefficient->root map only
  // resolves the pair to ~sqrt(eps), hence the long-double arithmetic.
  using Ld = long double;
  auto abs_sq = [](const std::complex<double>& z) -> Ld {
    return static_cast<Ld>(z.real()) * z.real() +
           static_cast<Ld>(z.imag()) * z.imag();
  };
  const Ld a12 = abs_sq(rho(0, 1));
  const Ld a13 = abs_sq(rho(0, 2));
  const Ld a23 = abs_sq(rho(1, 2));

  std::array<double, 3> xi;
  if (a12 + a13 + a23 < 1e-28L) {
    // Numerically diagonal: the eigenvalues are the diagonal itself. This
    // keeps exact corners (the t = 0 pure state in particular) exact.
    xi = {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
    std::sort(xi.begin(), xi.end(), std::greater<>());
  } else {
    const Ld d1 = static_cast<Ld>(rho(0, 0).real()) - 1.0L / 3.0L;
    const Ld d2 = static_cast<Ld>(rho(1, 1).real()) - 1.0L / 3.0L;
    const Ld d3 = static_cast<Ld>(rho(2, 2).real()) - 1.0L / 3.0L;
    const Ld triple =
        (std::complex<Ld>(rho(0, 1)) * std::complex<Ld>(rho(1, 2)) *
         std::complex<Ld>(rho(2, 0)))
            .real();

    const Ld r_sq = (d1 * d1 + d2 * d2 + d3 * d3 + 2.0L * (a12 + a13 + a23)) / 6.0L;
    const Ld R = std::sqrt(r_sq);
    if (R < 1e-12L) {
      xi = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    } else {
      const Ld det_m = d1 * d2 * d3 + 2.0L * triple - d1 * a23 - d2 * a13 - d3 * a12;
      const Ld q = -det_m / 2.0L;
      const Ld eta = std::acos(std::clamp(q / (R * R * R), -1.0L, 1.0L));
      constexpr Ld kPiThird = 1.047197551196597746L;
      xi = {static_cast<double>(1.0L / 3.0L - 2.0L * R * std::cos(eta / 3.0L)),
            static_cast<double>(1.0L / 3.0L +
                                2.0L * R * std::cos(eta / 3.0L + kPiThird)),
            static_cast<double>(1.0L / 3.0L +
                                2.0L * R * std::cos(eta / 3.0L - kPiThird))};
      std::sort(xi.begin(), xi.end(), std::greater<>());
    }
  }

  double worst_clamp = 0.0;
  for (double& v : xi) {
    if (v < -1e-6 || v > 1.0 + 1e-6)
      throw std::domain_error(
          "entropy_eigenvalues: eigenvalue outside [0,1]; density matrix "
          "invalid (upstream truncation failure?)");
    const double clamped = std::clamp(v, 0.0, 1.0);
    worst_clamp = std::max(worst_clamp, std::abs(clamped - v));
    v = clamped;
  }
  if (worst_clamp > 1e-9)
    std::cerr << "entropy_eigenvalues: clamped eigenvalue by " << worst_clamp
              << "\n";
  return {xi[0], xi[1], xi[2]};
}

double von_neumann_entropy(const EntropyEigenvalues& xi) {
  double s = 0.0;
  for (double v : {xi.xi1, xi.xi2, xi.xi3})
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

std::array<double, 3> populations(const AtomDensityMatrix& rho) {
  return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()};
}

TimeSeries entropy_series(const ModelConfig& cfg, std::span<const double> t_grid) {
  validate(cfg);
  const CoherentWeights weights =
      coherent_weights(cfg.nbar, cfg.alpha_phase, cfg.n_max);

  const int sectors = cfg.n_max + 1;
  std::vector<SectorTrajectory> traj(sectors);
  parallel_for(sectors,
               [&](int n) { traj[n] = solve_sector(n, cfg, t_grid); });

  TimeSeries out;
  out.path = choose_solver(cfg);
  out.samples.reserve(t_grid.size());

  JointState state;
  state.weights = weights;
  state.triples.resize(sectors);
  for (std::size_t it = 0; it < t_grid.size(); ++it) {
    state.t = t_grid[it];
    for (int n = 0; n < sectors; ++n) state.triples[n] = traj[n].psi[it];
    const AtomDensityMatrix rho = reduced_density(state);
    const EntropyEigenvalues xi = entropy_eigenvalues(rho);
    const auto pops = populations(rho);
    out.samples.push_back({state.t, scaled_time(state.t, cfg),
                           von_neumann_entropy(xi), pops[0], pops[1], pops[2]});
  }
  return out;
}

}  // namespace lamqed
