#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "halfline/diagnostics.hpp"
#include "halfline/stepper.hpp"

using namespace halfline;

namespace {

Trajectory run(const Params& p, const Field& u0, double t_end, double dt, FarBC far,
               std::size_t snap = 50) {
  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.far = far;
  cfg.scheme = EvolveConfig::Scheme::implicit_newton;
  cfg.snapshot_every = snap;
  return evolve(p, u0, cfg);
}

}  // namespace

TEST_CASE("zero count basics") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(2.0, 64));
  Vec v(g->n());
  for (std::size_t i = 0; i < g->n(); ++i) v[i] = g->nodes[i] - 1.0;
  ZeroCount zc = zero_count(Field(g, v, {}));
  CHECK(zc.count == 1);
  CHECK(zc.simple);
  CHECK_FALSE(zc.degenerate);

  ZeroCount zz = zero_count(Field(g, Vec(g->n(), 0.0), {}));
  CHECK(zz.degenerate);

  // tangential dip below tolerance without sign change: flagged non-simple
  for (std::size_t i = 0; i < g->n(); ++i) {
    const double x = g->nodes[i] - 1.0;
    v[i] = x * x;
  }
  ZeroCount zt = zero_count_values(v, 1e-3);
  CHECK(zt.count == 0);
  CHECK_FALSE(zt.simple);
}

TEST_CASE("comparison: identical data stay ordered") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 128));
  Params p(1.0, FluxModel::cosine(0.5));
  Field u0 = Field::affine(g, 1.0, 0.0);
  Trajectory a = run(p, u0, 1.0, 1e-3, FarBC::neumann(1.0));
  ComparisonReport rep = check_comparison(a, a, 1e-12);
  CHECK(rep.ordered);
  CHECK(rep.compared_snapshots > 2);
}

TEST_CASE("comparison: gauge copies keep a 2 pi gap") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 256));
  Params p(1.0, FluxModel::cosine(0.5));
  Field lo = Field::affine(g, 1.0, 0.0);
  Field hi = Field::affine(g, 1.0, two_pi);
  Trajectory a = run(p, lo, 2.0, 1e-3, FarBC::neumann(1.0));
  Trajectory b = run(p, hi, 2.0, 1e-3, FarBC::neumann(1.0));
  ComparisonReport rep = check_comparison(a, b, 1e-10);
  CHECK(rep.ordered);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t s = 0; s < a.snapshots.size(); ++s)
    for (std::size_t i = 0; i < g->n(); ++i)
      CHECK(b.snapshots[s].values[i] - a.snapshots[s].values[i] ==
            doctest::Approx(two_pi).epsilon(1e-8));
}

TEST_CASE("randomized ordered pairs stay ordered") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 128));
  Params p(1.0, FluxModel::cosine(0.5));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> amp(0.0, 0.5);
  for (int trial = 0; trial < 10; ++trial) {
    Vec lo(g->n()), hi(g->n());
    for (std::size_t i = 0; i < g->n(); ++i) {
      const double x = g->nodes[i];
      lo[i] = x + amp(rng) * std::sin(x + trial);
      hi[i] = lo[i] + 0.1 + amp(rng) * std::exp(-x);
    }
    Trajectory a = run(p, Field(g, lo, {1.0, 0.0}), 0.5, 1e-3, FarBC::neumann(1.0));
    Trajectory b = run(p, Field(g, hi, {1.0, 0.0}), 0.5, 1e-3, FarBC::neumann(1.0));
    ComparisonReport rep = check_comparison(a, b, 1e-9);
    CHECK(rep.ordered);
  }
}

TEST_CASE("zero number of a solution difference is non-increasing") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 256));
  Params p(1.0, FluxModel::cosine(0.5));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> amp(-0.4, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    Vec a0(g->n()), b0(g->n());
    for (std::size_t i = 0; i < g->n(); ++i) {
      const double x = g->nodes[i];
      a0[i] = x + amp(rng) * std::sin(3.0 * x) * std::exp(-0.3 * x);
      b0[i] = x + amp(rng) * std::cos(2.0 * x + trial) * std::exp(-0.3 * x);
    }
    Trajectory a = run(p, Field(g, a0, {1.0, 0.0}), 2.0, 1e-3, FarBC::neumann(1.0), 100);
    Trajectory b = run(p, Field(g, b0, {1.0, 0.0}), 2.0, 1e-3, FarBC::neumann(1.0), 100);
    std::vector<ZeroCount> hist = zero_history(a, b);
    REQUIRE(hist.size() >= 3);
    for (std::size_t j = 1; j < hist.size(); ++j) {
      if (hist[j].degenerate || hist[j - 1].degenerate) continue;
      CHECK(hist[j].count <= hist[j - 1].count);
    }
  }
}
