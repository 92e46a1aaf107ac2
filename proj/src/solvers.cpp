#include "lamqed/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "rk853.hpp"

namespace lamqed {

namespace {

using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

// Couplings with the mode shape factored out (g = 1), as used by every
// closed form.
struct BareCouplings {
  double f1, f2;
};

BareCouplings bare_couplings(int n, const ModelConfig& cfg) {
  if (n < 0) throw std::invalid_argument("solvers: photon sector n must be >= 0");
  const double root = std::sqrt(n + 1.0);
  return {cfg.lambda1 * root, cfg.lambda2 * root};
}

detail::RkState to_state(const AmplitudeTriple& a) {
  return {a.psi1, a.psi2, a.psi3};
}

AmplitudeTriple from_state(const detail::RkState& s) {
  return {s[0], s[1], s[2]};
}

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) return;
  if (t_grid.front() != 0.0)
    throw std::invalid_argument("solvers: t_grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] < t_grid[i - 1])
      throw std::invalid_argument("solvers: t_grid must be nondecreasing");
}

// Three-exponential solution for a stationary atom with arbitrary
// detunings. The rotating frame chi = diag(1, e^{-i d1 t}, e^{-i d2 t}) psi
// makes the sector equation autonomous, i chi' = H chi with the constant
// real symmetric
//
//   H = [[0, f1, f2], [f1, d1, 0], [f2, 0, d2]],
//
// so psi3 = sum_j C_j e^{i mu_j t} where mu_j = d2 - nu_j and nu_j are the
// (always real) eigenvalues of H. Eliminating psi1 and psi2 gives the cubic
// below; psi(0) = (1,0,0) pins
//
//   sum C_j = 0,  sum C_j mu_j = -f2,  sum C_j mu_j^2 = -f2 d2,
//
// whose Vandermonde solution is C_j = f2 (mu_k + mu_l - d2)/(mu_jk mu_jl).
struct GeneralModes {
  std::array<double, 3> mu{};
  std::array<double, 3> c{};
  double f1 = 0.0, f2 = 0.0, d1 = 0.0, d2 = 0.0;
  bool degenerate = false;

  AmplitudeTriple eval(double t) const {
    Cd s1{}, s2{}, s3{};
    for (int j = 0; j < 3; ++j) {
      const Cd e = c[j] * std::polar(1.0, mu[j] * t);
      s3 += e;
      s1 += mu[j] * e;
      s2 += (mu[j] * (mu[j] - d2) - f2 * f2) * e;
    }
    return {-s1 * std::polar(1.0 / f2, -d2 * t),
            s2 * std::polar(1.0 / (f1 * f2), (d1 - d2) * t), s3};
  }
};

GeneralModes make_general_modes(int n, const ModelConfig& cfg) {
  GeneralModes m;
  const auto [f1, f2] = bare_couplings(n, cfg);
  m.f1 = f1;
  m.f2 = f2;
  m.d1 = cfg.delta1;
  m.d2 = cfg.delta2;

  const double x1 = m.d1 - 2.0 * m.d2;
  const double x2 = m.d2 * (m.d2 - m.d1) - f1 * f1 - f2 * f2;
  const double x3 = f2 * f2 * (m.d2 - m.d1);
  const auto roots = cubic_roots_trig(x1, x2, x3);
  m.mu = {roots.mu1, roots.mu2, roots.mu3};

  const double mu_scale = std::max(std::abs(m.mu[0]), std::abs(m.mu[2]));
  const double gap = std::min({m.mu[0] - m.mu[1], m.mu[1] - m.mu[2], m.mu[0] - m.mu[2]});
  if (gap < 1e-8 * mu_scale) {
    m.degenerate = true;  // measure-zero coincidence; caller integrates instead
    return m;
  }
  for (int j = 0; j < 3; ++j) {
    const int k = (j + 1) % 3, l = (j + 2) % 3;
    m.c[j] = f2 * (m.mu[k] + m.mu[l] - m.d2) /
             ((m.mu[j] - m.mu[k]) * (m.mu[j] - m.mu[l]));
  }
  return m;
}

}  // namespace

std::string_view to_string(SolverChoice choice) {
  switch (choice) {
    case SolverChoice::Resonant: return "Resonant";
    case SolverChoice::EqualDetuning: return "EqualDetuning";
    case SolverChoice::GeneralAnalytic: return "GeneralAnalytic";
    case SolverChoice::NumericODE: return "NumericODE";
  }
  return "unknown";
}

CubicRealRoots cubic_roots_trig(double x1d, double x2d, double x3d) {
  // Extended precision throughout: the coefficient->root map is only
  // sqrt(eps)-accurate near a double root, which double precision would
  // turn into ~1e-8 of root error.
  using Ld = long double;
  const Ld x1 = x1d, x2 = x2d, x3 = x3d;

  // Characteristic scale of a root, used for all tolerance decisions.
  const Ld s = std::max({1.0L, std::abs(x1), std::sqrt(std::abs(x2)),
                         std::cbrt(std::abs(x3))});

  CubicRealRoots out;
  out.discriminant =
      static_cast<double>(18.0L * x1 * x2 * x3 - 4.0L * x1 * x1 * x1 * x3 +
                          x1 * x1 * x2 * x2 - 4.0L * x2 * x2 * x2 -
                          27.0L * x3 * x3);

  Ld q = x1 * x1 - 3.0L * x2;  // 9/4 of the depressed-cubic curvature
  if (q < 0.0L) {
    if (q < -1e-9L * s * s) {
      std::ostringstream msg;
      msg << "cubic_roots_trig: no three real roots (x1^2 - 3 x2 = "
          << static_cast<double>(q) << " < 0, discriminant = "
          << out.discriminant << ")";
      throw std::invalid_argument(msg.str());
    }
    q = 0.0L;
  }

  const Ld num = 9.0L * x1 * x2 - 2.0L * x1 * x1 * x1 - 27.0L * x3;
  std::array<double, 3> mu;
  if (q < 1e-16L * s * s) {
    // All three roots coincide only when the depressed cubic is mu'^3 = 0.
    if (std::abs(num) > 1e-9L * s * s * s) {
      std::ostringstream msg;
      msg << "cubic_roots_trig: no three real roots (degenerate quadratic "
             "part, discriminant = "
          << out.discriminant << ")";
      throw std::invalid_argument(msg.str());
    }
    mu.fill(static_cast<double>(-x1 / 3.0L));
  } else {
    Ld arg = num / (2.0L * q * std::sqrt(q));
    if (std::abs(arg) > 1.0L + 1e-9L) {
      std::ostringstream msg;
      msg << "cubic_roots_trig: no three real roots (acos argument "
          << static_cast<double>(arg) << ", discriminant = "
          << out.discriminant << ")";
      throw std::invalid_argument(msg.str());
    }
    arg = std::clamp(arg, -1.0L, 1.0L);
    const Ld xi = std::acos(arg) / 3.0L;
    const Ld amp = (2.0L / 3.0L) * std::sqrt(q);
    constexpr Ld kTwoPiThird = 2.094395102393195492L;
    for (int j = 0; j < 3; ++j)
      mu[j] = static_cast<double>(-x1 / 3.0L + amp * std::cos(xi + kTwoPiThird * j));
    std::sort(mu.begin(), mu.end(), std::greater<>());
  }
  out.mu1 = mu[0];
  out.mu2 = mu[1];
  out.mu3 = mu[2];
  return out;
}

AmplitudeTriple ode_rhs(double t, const AmplitudeTriple& psi, int n,
                        const ModelConfig& cfg) {
  const double f1 = coupling(n, 1, t, cfg);
  const double f2 = coupling(n, 2, t, cfg);
  const Cd F1 = f1 * std::polar(1.0, -cfg.delta1 * t);
  const Cd F2 = f2 * std::polar(1.0, -cfg.delta2 * t);
  return {-kI * (F1 * psi.psi2 + F2 * psi.psi3),
          -kI * (std::conj(F1) * psi.psi1),
          -kI * (std::conj(F2) * psi.psi1)};
}

std::vector<AmplitudeTriple> integrate_sector(int n, const ModelConfig& cfg,
                                              std::span<const double> t_grid) {
  check_grid(t_grid);
  std::vector<AmplitudeTriple> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;

  auto rhs = [n, &cfg](double t, const detail::RkState& y) -> detail::RkState {
    return to_state(ode_rhs(t, from_state(y), n, cfg));
  };
  detail::Rk853<decltype(rhs)> stepper(rhs, 1e-10, 1e-12);
  stepper.start(0.0, {1.0, 0.0, 0.0});
  for (double target : t_grid) {
    stepper.advance_to(target);
    out.push_back(from_state(stepper.state()));
  }
  return out;
}

AmplitudeTriple solve_resonant(int n, const ModelConfig& cfg, double t) {
  if (cfg.delta1 != 0.0 || cfg.delta2 != 0.0)
    throw std::invalid_argument("solve_resonant requires delta1 = delta2 = 0");
  const auto [f1, f2] = bare_couplings(n, cfg);
  const double delta = std::hypot(f1, f2);

  // For the moving atom M(t) = g(t) M0 commutes with itself at all times,
  // so the propagator is the stationary one evaluated at the integrated
  // mode shape Theta = int_0^t g.
  double theta = t;
  if (cfg.motion) {
    const double pl = cfg.motion->p * cfg.lambda1;
    theta = (1.0 - std::cos(pl * t)) / pl;
  }
  const double c = std::cos(delta * theta);
  const double s = std::sin(delta * theta) / delta;
  return {c, -kI * (f1 * s), -kI * (f2 * s)};
}

AmplitudeTriple solve_equal_detuning(int n, const ModelConfig& cfg, double t) {
  if (cfg.delta1 != cfg.delta2)
    throw std::invalid_argument("solve_equal_detuning requires delta1 == delta2");
  if (cfg.motion)
    throw std::invalid_argument("solve_equal_detuning requires a stationary atom");
  const auto [f1, f2] = bare_couplings(n, cfg);
  const double D = cfg.delta1;
  const double delta = std::hypot(f1, f2);

  // In the frame phi_{2,3} = e^{-i D t} psi_{2,3} the generator is the
  // constant real symmetric [[0,f1,f2],[f1,D,0],[f2,0,D]]; the dynamics
  // stays in span{(1,0,0), (0,f1,f2)/delta} and exponentiating that 2x2
  // block gives the form below with eta = sqrt((D/2)^2 + delta^2).
  const double eta = std::sqrt(0.25 * D * D + delta * delta);
  const double ce = std::cos(eta * t);
  const double se = std::sin(eta * t) / eta;
  const Cd psi1 = std::polar(1.0, -0.5 * D * t) * Cd{ce, 0.5 * D * se};
  const Cd lower = std::polar(1.0, 0.5 * D * t) * (-kI * se);
  return {psi1, f1 * lower, f2 * lower};
}

AmplitudeTriple solve_general(int n, const ModelConfig& cfg, double t) {
  if (cfg.motion)
    throw std::invalid_argument("solve_general requires a stationary atom");
  const GeneralModes modes = make_general_modes(n, cfg);
  if (modes.degenerate) {
    if (t == 0.0) return {1.0, 0.0, 0.0};
    const std::array<double, 2> grid{0.0, t};
    return integrate_sector(n, cfg, grid).back();
  }
  return modes.eval(t);
}

SolverChoice choose_solver(const ModelConfig& cfg) {
  const bool resonant = cfg.delta1 == 0.0 && cfg.delta2 == 0.0;
  if (cfg.motion) return resonant ? SolverChoice::Resonant : SolverChoice::NumericODE;
  if (resonant) return SolverChoice::Resonant;
  if (cfg.delta1 == cfg.delta2) return SolverChoice::EqualDetuning;
  return SolverChoice::GeneralAnalytic;
}

SectorTrajectory solve_sector(int n, const ModelConfig& cfg,
                              std::span<const double> t_grid) {
  validate(cfg);
  check_grid(t_grid);
  SectorTrajectory out;
  out.path = choose_solver(cfg);
  out.psi.reserve(t_grid.size());

  switch (out.path) {
    case SolverChoice::Resonant:
      for (double t : t_grid) out.psi.push_back(solve_resonant(n, cfg, t));
      break;
    case SolverChoice::EqualDetuning:
      for (double t : t_grid) out.psi.push_back(solve_equal_detuning(n, cfg, t));
      break;
    case SolverChoice::GeneralAnalytic: {
      const GeneralModes modes = make_general_modes(n, cfg);
      if (modes.degenerate) {
        out.psi = integrate_sector(n, cfg, t_grid);
      } else {
        for (double t : t_grid) out.psi.push_back(modes.eval(t));
      }
      break;
    }
    case SolverChoice::NumericODE:
      out.psi = integrate_sector(n, cfg, t_grid);
      break;
  }
  return out;
}

}  // namespace lamqed
