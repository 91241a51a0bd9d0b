#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/selfsim.hpp"
#include "halfline/special.hpp"

using namespace halfline;

TEST_CASE("stationary similarity profile by shooting") {
  SimilarityProfile prof = similarity_stationary_profile(12.0, 2048);
  CHECK(std::abs(prof.V0 - 1.0 / std::sqrt(pi)) <= 1e-8);
  // V'(0) = -V(0)^2 = -1/pi
  CHECK(prof.Vp[0] == doctest::Approx(-1.0 / pi).epsilon(1e-8));
  CHECK(prof.boundary_residual <= 1e-4);

  // profile equals (1/sqrt(pi)) e^{xi^2/4} erfc(xi/2) (closed-form oracle)
  for (std::size_t i = 0; i < prof.xi.size(); i += 64) {
    const double xi = prof.xi[i];
    const double closed = std::exp(0.25 * xi * xi) * erf_c(0.5 * xi) / std::sqrt(pi);
    CHECK(prof.V[i] == doctest::Approx(closed).epsilon(1e-9));
  }
  // positivity and monotone decay
  for (std::size_t i = 1; i < prof.V.size(); ++i) {
    CHECK(prof.V[i] > 0.0);
    CHECK(prof.V[i] <= prof.V[i - 1] + 1e-14);
  }

  // interior residual of the defining equation, 4th-order differences of V'
  const double h = prof.xi[1] - prof.xi[0];
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < prof.xi.size(); ++i) {
    const double vpp = (-prof.Vp[i + 2] + 8.0 * prof.Vp[i + 1] - 8.0 * prof.Vp[i - 1] +
                        prof.Vp[i - 2]) /
                       (12.0 * h);
    worst = std::max(worst,
                     std::abs(vpp - 0.5 * prof.xi[i] * prof.Vp[i] - 0.5 * prof.V[i]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("similarity spectrum ladder") {
  SpectrumReport rep = similarity_spectrum({400, 800, 1600}, 12.0, 4);
  REQUIRE(rep.extrapolated.size() >= 2);
  CHECK(rep.ladder_cauchy);
  CHECK(std::abs(rep.extrapolated[0] - 1.0) <= 1e-3);        // sigma_u = {1}
  CHECK(std::abs(rep.extrapolated[1] - (-1.2316)) <= 5e-3);  // lambda_s
  // eigenvalues real and ordered for this symmetrized problem
  for (const auto& lvl : rep.eigenvalues)
    for (std::size_t j = 1; j < lvl.size(); ++j) CHECK(lvl[j] < lvl[j - 1]);

  // Neumann variant: Hermite-type half-line spectrum {-1/2, -3/2, ...}
  SpectrumReport neumann = similarity_spectrum({800, 1600}, 12.0, 2, 0.0);
  CHECK(std::abs(neumann.extrapolated[0] - (-0.5)) <= 1e-6);
  CHECK(std::abs(neumann.extrapolated[1] - (-1.5)) <= 1e-6);
}

TEST_CASE("discrete stationary state is a fixed point of the similarity flow") {
  auto grid = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 600));
  Vec vstar = similarity_stationary_discrete(grid);
  SimilarityState s0{grid, vstar, 0.0, 0.0};
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  SimilarityEvolveResult out = similarity_evolve(s0, false, 0.0, 5.0, cfg);
  REQUIRE(out.trajectory.ok);
  CHECK(sup_diff(out.state.V, vstar) <= 1e-8);
  CHECK(out.state.tau == doctest::Approx(5.0));
}

TEST_CASE("eta equation integrates exactly") {
  auto grid = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 600));
  Vec vstar = similarity_stationary_discrete(grid);
  SimilarityState s0{grid, vstar, 0.0, 0.37};
  EvolveConfig cfg;
  cfg.dt = 5e-3;
  SimilarityEvolveResult out = similarity_evolve(s0, true, 0.2, 2.0, cfg);
  CHECK(out.state.eta == doctest::Approx(0.37 * std::exp(1.0)).epsilon(1e-12));
}

TEST_CASE("unstable direction grows like e^tau") {
  auto grid = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 600));
  Vec vstar = similarity_stationary_discrete(grid);
  Vec phi1 = similarity_unstable_eigenfunction(*grid);

  // gaussian-weight projection helpers
  Vec w(grid->n(), 0.0);
  for (std::size_t i = 0; i + 1 < grid->n(); ++i) {
    const double h = grid->nodes[i + 1] - grid->nodes[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  for (std::size_t i = 0; i < grid->n(); ++i) w[i] *= std::exp(-0.25 * grid->nodes[i] * grid->nodes[i]);
  auto project = [&](const Vec& v) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      num += w[i] * (v[i] - vstar[i]) * phi1[i];
      den += w[i] * phi1[i] * phi1[i];
    }
    return num / den;
  };

  Vec v0 = vstar;
  for (double& x : v0) x *= 1.2;
  SimilarityState s{grid, v0, 0.0, 0.0};
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;

  Vec taus, logs;
  double tau = 0.0;
  for (int step = 0; step < 8; ++step) {
    taus.push_back(tau);
    logs.push_back(std::log(std::abs(project(s.V))));
    SimilarityEvolveResult out = similarity_evolve(s, false, 0.0, tau + 0.1, cfg);
    REQUIRE(out.trajectory.ok);
    s = out.state;
    tau += 0.1;
  }
  const double slope = linear_fit(taus, logs).second;
  CHECK(std::abs(slope - 1.0) <= 0.1);
}

TEST_CASE("two-route check: (x,t) evolution against similarity variables") {
  // flux 2 cos(u) - 2 = -u^2 + O(u^4): quadratic zero, no cubic term
  FluxModel g = FluxModel::affine_shift(FluxModel::cosine(2.0), -3.0);
  const double t0 = -100.0, t1 = -25.0;
  const double eta0 = 1.0 / std::sqrt(-t0);

  auto xi_grid = std::make_shared<Grid1D>(Grid1D::uniform(10.0, 512));
  Vec v0 = similarity_stationary_discrete(xi_grid);
  for (double& x : v0) x *= 1.05;  // slightly off the fixed point

  // route 1: physical variables
  auto x_grid = std::make_shared<Grid1D>(Grid1D::tanh_clustered(120.0, 768, 2.0));
  Vec u0(x_grid->n(), 0.0);
  {
    const double dxi = xi_grid->nodes[1] - xi_grid->nodes[0];
    for (std::size_t i = 0; i < u0.size(); ++i) {
      const double xi = x_grid->nodes[i] * eta0;
      if (xi >= xi_grid->length()) {
        u0[i] = eta0 * v0.back() * xi_grid->length() / xi;  // 1/xi tail
      } else {
        const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(xi / dxi),
                                                    xi_grid->n() - 2);
        const double frac = (xi - xi_grid->nodes[j]) / dxi;
        u0[i] = eta0 * ((1.0 - frac) * v0[j] + frac * v0[j + 1]);
      }
    }
  }
  Params p(0.0, g);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.dt_growth = 1.03;
  cfg.dt_max = 0.05;
  cfg.t_end = t1 - t0;
  cfg.far = FarBC::neumann(0.0);
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  Trajectory phys = evolve(p, Field(x_grid, u0, FarField{0.0, 0.0}), cfg);
  REQUIRE(phys.ok);

  // route 2: similarity variables, tau = -log(-t)
  SimilarityState s0{xi_grid, v0, -std::log(-t0), eta0};
  EvolveConfig cfg2;
  cfg2.dt = 1e-3;
  cfg2.scheme = EvolveConfig::Scheme::implicit_newton;
  SimilarityEvolveResult sim = similarity_evolve(s0, false, 0.0, -std::log(-t1), cfg2);
  REQUIRE(sim.trajectory.ok);

  // compare u(x, t1) with V(x/sqrt(-t1))/sqrt(-t1)
  const double root = std::sqrt(-t1);
  const double dxi = xi_grid->nodes[1] - xi_grid->nodes[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < x_grid->n(); ++i) {
    const double x = x_grid->nodes[i];
    const double xi = x / root;
    if (xi > 8.0) break;
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(xi / dxi),
                                                xi_grid->n() - 2);
    const double frac = (xi - xi_grid->nodes[j]) / dxi;
    const double v_sim = ((1.0 - frac) * sim.state.V[j] + frac * sim.state.V[j + 1]) / root;
    worst = std::max(worst, std::abs(phys.snapshots.back().values[i] - v_sim));
  }
  CHECK(worst <= 2e-3 * sup_norm(sim.state.V) / root + 2e-5);
}

TEST_CASE("diffusive drift: explicit solution for unit flux") {
  auto grid = std::make_shared<Grid1D>(Grid1D::tanh_clustered(6.0 * std::sqrt(10.0), 512, 3.0));
  Field u0 = Field::constant(grid, 0.0);
  EvolveConfig cfg;
  cfg.dt = 1e-6;
  cfg.dt_growth = 1.03;
  cfg.dt_max = 0.02;
  cfg.t_end = 10.0;
  cfg.far = FarBC::neumann(0.0);
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  DriftReport rep = drift_experiment(FluxModel::cosine(0.0), u0, 10.0, cfg);
  REQUIRE(rep.trajectory.ok);
  CHECK(rep.envelope_ok);
  for (double t : {1.0, 4.0, pi * pi}) {
    const double expect = -2.0 * std::sqrt(t / pi);
    CHECK(std::abs(rep.trajectory.trace_value(t) - expect) <= 1e-4 * std::abs(expect));
  }
  CHECK(rep.fitted_coefficient == doctest::Approx(2.0 / std::sqrt(pi)).epsilon(0.01));

  // closed-form comparison field at a few points
  for (double x : {0.0, 1.0, 3.0})
    CHECK(constant_flux_solution(x, 4.0, 1.0, 0.0) ==
          doctest::Approx(-2.0 * (std::sqrt(4.0 / pi) * std::exp(-x * x / 16.0) -
                                  0.5 * x * erf_c(0.25 * x))).epsilon(1e-13));
}

TEST_CASE("diffusive drift: cosine flux envelope and forgotten data") {
  auto grid = std::make_shared<Grid1D>(Grid1D::tanh_clustered(6.0 * std::sqrt(60.0), 512, 3.0));
  EvolveConfig cfg;
  cfg.dt = 1e-6;
  cfg.dt_growth = 1.03;
  cfg.dt_max = 0.05;
  cfg.t_end = 60.0;
  cfg.far = FarBC::neumann(0.0);
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;

  DriftReport a = drift_experiment(FluxModel::cosine(0.5), Field::constant(grid, 0.0), 60.0, cfg);
  REQUIRE(a.trajectory.ok);
  CHECK(a.envelope_ok);
  CHECK(a.fitted_coefficient >= 2.0 * 0.5 / std::sqrt(pi));
  CHECK(a.fitted_coefficient <= 2.0 * 1.5 / std::sqrt(pi));

  DriftReport b = drift_experiment(FluxModel::cosine(0.5), Field::constant(grid, 7.0), 60.0, cfg);
  REQUIRE(b.trajectory.ok);
  CHECK(b.envelope_ok);
  CHECK(std::abs(b.fitted_coefficient - a.fitted_coefficient) <= 0.02 * a.fitted_coefficient);
}

TEST_CASE("departure rate at a linear zero (c = 0)") {
  for (double gamma : {1.0, 0.5}) {
    Vec samples(64);
    for (std::size_t j = 0; j < samples.size(); ++j)
      samples[j] = -gamma * std::sin(two_pi * j / samples.size());
    FluxModel g = FluxModel::table(samples);
    RateFit fit = rate_fit_linear_zero(g, gamma, 30.0, 320);
    REQUIRE(fit.ok);
    CHECK(std::abs(fit.fitted_rate - gamma * gamma) <= 0.1 * gamma * gamma);
    CHECK(std::abs(fit.fitted_shape_slope - (-gamma)) <= 0.05 * gamma);
  }
}
