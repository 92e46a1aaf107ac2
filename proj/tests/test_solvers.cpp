#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lamqed/solvers.hpp"
#include "test_support.hpp"

using namespace lamqed;
using lamqed::test::companion_roots;
using lamqed::test::max_component_diff;
using lamqed::test::rk4_reference;
using std::numbers::pi;
using Cd = std::complex<double>;

namespace {

ModelConfig stationary(double d1, double d2, double l1 = 1.0, double l2 = 1.0) {
  ModelConfig cfg;
  cfg.lambda1 = l1;
  cfg.lambda2 = l2;
  cfg.delta1 = d1;
  cfg.delta2 = d2;
  cfg.n_max = 4;
  return cfg;
}

ModelConfig moving(double d1, double d2, int p) {
  ModelConfig cfg = stationary(d1, d2);
  cfg.motion = Motion{p};
  return cfg;
}

std::vector<double> linspace(double t_max, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = t_max * i / (count - 1);
  return grid;
}

// Central-difference check that psi(t) from `solver` satisfies the sector
// ODE (per-component, h = 1e-6).
template <class Solver>
double ode_residual(Solver&& solver, int n, const ModelConfig& cfg, double t) {
  const double h = 1e-6;
  const AmplitudeTriple plus = solver(n, cfg, t + h);
  const AmplitudeTriple minus = solver(n, cfg, t - h);
  const AmplitudeTriple deriv{(plus.psi1 - minus.psi1) / (2.0 * h),
                              (plus.psi2 - minus.psi2) / (2.0 * h),
                              (plus.psi3 - minus.psi3) / (2.0 * h)};
  const AmplitudeTriple rhs = ode_rhs(t, solver(n, cfg, t), n, cfg);
  return max_component_diff(deriv, rhs);
}

}  // namespace

TEST_CASE("ode_rhs: direct matrix application") {
  const ModelConfig cfg = stationary(0.0, 0.0);
  const auto d = ode_rhs(0.0, {1.0, 0.0, 0.0}, 0, cfg);
  CHECK(d.psi1 == Cd{0.0, 0.0});
  CHECK(d.psi2 == Cd{0.0, -1.0});
  CHECK(d.psi3 == Cd{0.0, -1.0});

  const ModelConfig two = stationary(0.0, 0.0, 1.0, 2.0);
  const auto e = ode_rhs(0.0, {0.0, 1.0, 0.0}, 0, two);
  CHECK(e.psi1 == Cd{0.0, -1.0});
  CHECK(e.psi2 == Cd{0.0, 0.0});
  CHECK(e.psi3 == Cd{0.0, 0.0});
}

TEST_CASE("ode_rhs: generator is anti-Hermitian (norm derivative vanishes)") {
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 50; ++trial) {
    const ModelConfig cfg = stationary(gauss(rng), gauss(rng), 0.3 + std::abs(gauss(rng)),
                                       0.3 + std::abs(gauss(rng)));
    AmplitudeTriple psi{{gauss(rng), gauss(rng)},
                        {gauss(rng), gauss(rng)},
                        {gauss(rng), gauss(rng)}};
    const double t = std::abs(gauss(rng));
    const auto d = ode_rhs(t, psi, 3, cfg);
    const double re = (std::conj(psi.psi1) * d.psi1 + std::conj(psi.psi2) * d.psi2 +
                       std::conj(psi.psi3) * d.psi3)
                          .real();
    CHECK(std::abs(re) < 1e-12);
  }
}

TEST_CASE("cubic solver: factorable cases") {
  const auto a = cubic_roots_trig(0.0, -1.0, 0.0);  // mu^3 - mu
  CHECK(a.mu1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.mu2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(a.mu3 == doctest::Approx(-1.0).epsilon(1e-12));

  const auto b = cubic_roots_trig(-6.0, 11.0, -6.0);  // (mu-1)(mu-2)(mu-3)
  CHECK(b.mu1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(b.mu2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.mu3 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cubic solver: random symmetric-matrix coefficients vs companion oracle") {
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    // characteristic polynomial of a random real symmetric matrix
    double h[3][3];
    for (int r = 0; r < 3; ++r)
      for (int c = r; c < 3; ++c) h[r][c] = h[c][r] = gauss(rng);
    const double tr = h[0][0] + h[1][1] + h[2][2];
    const double minors = h[0][0] * h[1][1] - h[0][1] * h[0][1] +
                          h[0][0] * h[2][2] - h[0][2] * h[0][2] +
                          h[1][1] * h[2][2] - h[1][2] * h[1][2];
    const double det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[1][2]) -
                       h[0][1] * (h[0][1] * h[2][2] - h[1][2] * h[0][2]) +
                       h[0][2] * (h[0][1] * h[1][2] - h[1][1] * h[0][2]);
    const double x1 = -tr, x2 = minors, x3 = -det;

    const auto roots = cubic_roots_trig(x1, x2, x3);
    const auto oracle = companion_roots(x1, x2, x3);
    CHECK(std::abs(roots.mu1 - oracle[0]) < 1e-9);
    CHECK(std::abs(roots.mu2 - oracle[1]) < 1e-9);
    CHECK(std::abs(roots.mu3 - oracle[2]) < 1e-9);

    // elementary-symmetric reconstruction of the coefficients
    const double scale = std::max({1.0, std::abs(x1), std::abs(x2), std::abs(x3)});
    CHECK(std::abs(roots.mu1 + roots.mu2 + roots.mu3 + x1) < 1e-9 * scale);
    CHECK(std::abs(roots.mu1 * roots.mu2 + roots.mu1 * roots.mu3 +
                   roots.mu2 * roots.mu3 - x2) < 1e-9 * scale);
    CHECK(std::abs(roots.mu1 * roots.mu2 * roots.mu3 + x3) < 1e-9 * scale);

    // per-root polynomial residual
    for (double mu : {roots.mu1, roots.mu2, roots.mu3})
      CHECK(std::abs(((mu + x1) * mu + x2) * mu + x3) < 1e-9 * scale);
  }
}

TEST_CASE("cubic solver: complex-root inputs are rejected, triple roots handled") {
  CHECK_THROWS_AS(cubic_roots_trig(0.0, 1.0, 0.0), std::invalid_argument);   // 0, +-i
  CHECK_THROWS_AS(cubic_roots_trig(0.0, 0.0, -1.0), std::invalid_argument);  // cube roots of 1

  const auto t = cubic_roots_trig(-3.0, 3.0, -1.0);  // (mu-1)^3
  CHECK(t.mu1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(t.mu3 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("integrator: initial condition and resonant reference point") {
  const ModelConfig cfg = stationary(0.0, 0.0);
  const auto grid = std::array{0.0, pi / (2.0 * std::sqrt(2.0))};
  const auto psi = integrate_sector(0, cfg, grid);

  CHECK(psi[0].psi1 == Cd{1.0, 0.0});
  CHECK(psi[0].psi2 == Cd{0.0, 0.0});

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi[1].psi1) < 1e-9);
  CHECK(std::abs(psi[1].psi2 - Cd{0.0, -inv_sqrt2}) < 1e-9);
  CHECK(std::abs(psi[1].psi3 - Cd{0.0, -inv_sqrt2}) < 1e-9);
}

TEST_CASE("integrator: resonant moving atom returns home after one motion period") {
  const ModelConfig cfg = moving(0.0, 0.0, 1);
  const auto grid = std::array{0.0, 2.0 * pi};
  const auto psi = integrate_sector(0, cfg, grid);
  CHECK(std::abs(psi[1].psi1 - Cd{1.0, 0.0}) < 1e-8);
  CHECK(std::abs(psi[1].psi2) < 1e-8);
  CHECK(std::abs(psi[1].psi3) < 1e-8);
}

TEST_CASE("integrator: agrees with an independent fixed-step RK4 on a stiff-phase case") {
  const ModelConfig cfg = stationary(0.0, 100.0);
  const auto grid = std::array{0.0, 1.0};
  const auto psi = integrate_sector(10, cfg, grid).back();
  const auto ref = rk4_reference(10, cfg, 1.0, 200000);
  CHECK(max_component_diff(psi, ref) < 1e-8);
}

TEST_CASE("integrator: frozen external reference, moving atom with detuning") {
  // DOP853 at rtol 5e-14 (independent implementation): p=1, deltas (2,3),
  // lambda = 1, n = 0, t = 2.
  ModelConfig cfg = moving(2.0, 3.0, 1);
  const auto grid = std::array{0.0, 2.0};
  const auto psi = integrate_sector(0, cfg, grid).back();
  const AmplitudeTriple ref{{0.5406254580395361, 0.7322647917156498},
                            {0.1268786520061509, 0.3911505580615382},
                            {-0.0432380711826074, -0.02336464694431998}};
  CHECK(max_component_diff(psi, ref) < 1e-8);
}

TEST_CASE("integrator: norm drift stays diagnostic-small") {
  for (const auto& [d1, d2] :
       std::array{std::pair{0.0, 100.0}, std::pair{5.0, 4.0}}) {
    const ModelConfig cfg = stationary(d1, d2);
    const auto grid = linspace(50.0, 101);
    const auto psi = integrate_sector(25, cfg, grid);
    for (const auto& a : psi) CHECK(std::abs(a.norm_sq() - 1.0) < 1e-7);
  }
}

TEST_CASE("integrator: grid validation and pathological parameters") {
  const ModelConfig cfg = stationary(0.0, 0.0);
  const auto bad_start = std::array{1.0, 2.0};
  CHECK_THROWS_AS(integrate_sector(0, cfg, bad_start), std::invalid_argument);
  const auto not_sorted = std::array{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(integrate_sector(0, cfg, not_sorted), std::invalid_argument);

  const ModelConfig absurd = stationary(0.0, 1e16);
  const auto grid = std::array{0.0, 1.0};
  CHECK_THROWS_AS(integrate_sector(0, absurd, grid), std::runtime_error);
}

TEST_CASE("resonant solver: reference points and coupling ratio") {
  const ModelConfig cfg = stationary(0.0, 0.0);
  const auto at0 = solve_resonant(0, cfg, 0.0);
  CHECK(at0.psi1 == Cd{1.0, 0.0});
  CHECK(at0.psi2 == Cd{0.0, 0.0});

  const auto split = solve_resonant(0, cfg, pi / (2.0 * std::sqrt(2.0)));
  CHECK(std::abs(split.psi1) < 1e-15);
  CHECK(std::abs(split.psi2 - Cd{0.0, -1.0 / std::sqrt(2.0)}) < 1e-15);

  const ModelConfig lopsided = stationary(0.0, 0.0, 3.0, 4.0);
  for (double t : {0.3, 1.7, 9.2}) {
    const auto psi = solve_resonant(0, lopsided, t);
    CHECK(std::abs(psi.psi2 / psi.psi3) == doctest::Approx(0.75).epsilon(1e-12));
  }

  CHECK_THROWS_AS(solve_resonant(0, stationary(0.1, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("resonant solver: motion closed form is exactly periodic and matches the integrator") {
  const ModelConfig cfg = moving(0.0, 0.0, 3);
  const double period = 2.0 * pi / 3.0;
  for (double t : {0.4, 1.1, 2.9}) {
    const auto a = solve_resonant(7, cfg, t);
    const auto b = solve_resonant(7, cfg, t + period);
    CHECK(max_component_diff(a, b) < 1e-12);
  }

  std::vector<double> grid = linspace(3.0, 31);
  const auto numeric = integrate_sector(5, cfg, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(max_component_diff(numeric[i], solve_resonant(5, cfg, grid[i])) < 1e-7);
}

TEST_CASE("equal-detuning solver: initial condition, continuity, and ODE oracle") {
  const ModelConfig cfg = stationary(1.0, 1.0);
  const auto at0 = solve_equal_detuning(0, cfg, 0.0);
  CHECK(std::abs(at0.psi1 - Cd{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(at0.psi2) < 1e-15);

  // continuity toward the resonant formula
  const ModelConfig tiny = stationary(1e-8, 1e-8);
  const ModelConfig zero = stationary(0.0, 0.0);
  CHECK(max_component_diff(solve_equal_detuning(0, tiny, 1.0),
                           solve_resonant(0, zero, 1.0)) < 1e-8);

  // frozen external reference (DOP853 at rtol 5e-14): D=1, f1=f2=1, t=1
  const AmplitudeTriple ref{{0.22148592506304549, 0.25788151426336986},
                            {0.31881638080509433, -0.5835894705445259},
                            {0.31881638080509433, -0.5835894705445259}};
  CHECK(max_component_diff(solve_equal_detuning(0, cfg, 1.0), ref) < 1e-12);

  const auto grid = std::array{0.0, 1.0};
  CHECK(max_component_diff(solve_equal_detuning(0, cfg, 1.0),
                           integrate_sector(0, cfg, grid).back()) < 1e-8);

  CHECK_THROWS_AS(solve_equal_detuning(0, stationary(1.0, 2.0), 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_equal_detuning(0, moving(1.0, 1.0, 1), 1.0),
                  std::invalid_argument);
}

TEST_CASE("general solver: initial condition, continuity, and ODE oracle") {
  for (const auto& [d1, d2] : std::array{std::pair{0.0, 100.0}, std::pair{5.0, 4.0},
                                         std::pair{2.0, -3.0}}) {
    const auto at0 = solve_general(3, stationary(d1, d2), 0.0);
    CHECK(std::abs(at0.psi1 - Cd{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(at0.psi2) < 1e-12);
    CHECK(std::abs(at0.psi3) < 1e-12);
  }

  const ModelConfig zero = stationary(0.0, 0.0);
  CHECK(max_component_diff(solve_general(0, stationary(1e-8, 2e-8), 1.0),
                           solve_resonant(0, zero, 1.0)) < 1e-8);
  CHECK(max_component_diff(solve_general(0, stationary(1e-8, 1e-8), 1.0),
                           solve_resonant(0, zero, 1.0)) < 1e-8);

  // frozen external reference (DOP853 at rtol 5e-14): deltas (5,4),
  // f1 = f2 = 5 (n = 24, lambda = 1), t = 1
  const ModelConfig fig4 = stationary(5.0, 4.0);
  const AmplitudeTriple ref{{-0.04009907457386298, -0.48147107390574867},
                            {0.1877469055510107, 0.5618579418782598},
                            {0.6422459223235274, 0.05625475156386135}};
  CHECK(max_component_diff(solve_general(24, fig4, 1.0), ref) < 1e-11);

  const auto grid = std::array{0.0, 1.0};
  CHECK(max_component_diff(solve_general(24, fig4, 1.0),
                           integrate_sector(24, fig4, grid).back()) < 1e-8);

  // frozen external reference: deltas (0,100), f1 = f2 = 1 (n = 0), t = 2
  const ModelConfig far = stationary(0.0, 100.0);
  const AmplitudeTriple ref2{{-0.4160112619693969, 4.7306896899940257e-4},
                             {0.00909348676506492, -0.90922546660020187},
                             {0.01209957573780869, -3.7902205003784830e-3}};
  CHECK(max_component_diff(solve_general(0, far, 2.0), ref2) < 1e-10);

  CHECK_THROWS_AS(solve_general(0, moving(5.0, 4.0, 1), 1.0), std::invalid_argument);
}

TEST_CASE("analytic solvers: differentiated solutions satisfy the sector ODE") {
  struct Case {
    ModelConfig cfg;
    AmplitudeTriple (*solver)(int, const ModelConfig&, double);
  };
  const Case cases[] = {
      {stationary(0.0, 0.0), &solve_resonant},
      {stationary(10.0, 10.0), &solve_equal_detuning},
      {stationary(0.0, 100.0), &solve_general},
      {stationary(5.0, 4.0), &solve_general},
  };
  for (const auto& c : cases)
    for (int n : {0, 10, 25})
      for (double t : {1.0, 7.3, 29.0})
        CHECK(ode_residual(c.solver, n, c.cfg, t) < 1e-5);
}

TEST_CASE("analytic solvers: norm conservation over the working window") {
  const ModelConfig cfgs[] = {stationary(0.0, 0.0), stationary(10.0, 10.0),
                              stationary(0.0, 100.0), stationary(5.0, 4.0),
                              moving(0.0, 0.0, 1), moving(0.0, 0.0, 3)};
  const auto grid = linspace(50.0, 101);
  for (const auto& cfg : cfgs) {
    const auto choice = choose_solver(cfg);
    REQUIRE(choice != SolverChoice::NumericODE);
    for (int n : {0, 25}) {
      const auto traj = solve_sector(n, cfg, grid);
      for (const auto& psi : traj.psi)
        CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("dispatch covers the configuration space") {
  CHECK(choose_solver(stationary(0.0, 0.0)) == SolverChoice::Resonant);
  CHECK(choose_solver(stationary(10.0, 10.0)) == SolverChoice::EqualDetuning);
  CHECK(choose_solver(stationary(0.0, 100.0)) == SolverChoice::GeneralAnalytic);
  CHECK(choose_solver(stationary(5.0, 4.0)) == SolverChoice::GeneralAnalytic);
  CHECK(choose_solver(moving(0.0, 0.0, 1)) == SolverChoice::Resonant);
  CHECK(choose_solver(moving(0.0, 0.0, 3)) == SolverChoice::Resonant);
  CHECK(choose_solver(moving(5.0, 4.0, 1)) == SolverChoice::NumericODE);
  CHECK(choose_solver(moving(10.0, 10.0, 3)) == SolverChoice::NumericODE);

  CHECK(to_string(SolverChoice::Resonant) == "Resonant");
  CHECK(to_string(SolverChoice::NumericODE) == "NumericODE");
}

TEST_CASE("solve_sector: records the dispatch path and matches the per-time solvers") {
  const auto grid = linspace(5.0, 11);

  const ModelConfig fig4 = stationary(5.0, 4.0);
  const auto traj = solve_sector(7, fig4, grid);
  CHECK(traj.path == SolverChoice::GeneralAnalytic);
  REQUIRE(traj.psi.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(max_component_diff(traj.psi[i], solve_general(7, fig4, grid[i])) < 1e-12);

  const ModelConfig wild = moving(5.0, 4.0, 1);
  const auto numeric = solve_sector(7, wild, grid);
  CHECK(numeric.path == SolverChoice::NumericODE);
  const auto direct = integrate_sector(7, wild, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(max_component_diff(numeric.psi[i], direct[i]) < 1e-12);
}
