#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "halfline/grid.hpp"

using namespace halfline;

TEST_CASE("grid factories") {
  Grid1D u = Grid1D::uniform(10.0, 64);
  CHECK(u.nodes.front() == 0.0);
  CHECK(u.nodes.back() == 10.0);
  Grid1D t = Grid1D::tanh_clustered(10.0, 64, 2.5);
  CHECK(t.nodes.front() == 0.0);
  CHECK(t.nodes.back() == 10.0);
  // clustered at zero: first spacing well below the last
  CHECK((t.nodes[1] - t.nodes[0]) < 0.2 * (t.nodes[63] - t.nodes[62]));
  for (std::size_t i = 1; i < t.n(); ++i) CHECK(t.nodes[i] > t.nodes[i - 1]);
  CHECK_THROWS_AS(Grid1D::uniform(10.0, 4), std::invalid_argument);
}

TEST_CASE("default truncation") {
  CHECK(default_truncation(2.0, 0.0) == doctest::Approx(10.0));
  CHECK(default_truncation(0.5, 0.0) == doctest::Approx(24.0));
  CHECK(default_truncation(0.0, 100.0) == doctest::Approx(60.0));
}

TEST_CASE("weighting round trip") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(10.0, 128));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(g->n());
  for (double& x : v) x = dist(rng);
  Field f(g, v, FarField{0.3, 0.1});

  SUBCASE("c = 0 is the identity") {
    Field w = to_weighted(f, 0.0);
    CHECK(sup_diff(w.values, f.values) == 0.0);
  }
  SUBCASE("u = e^{c x/2} maps to 1") {
    Field e(g, Vec(g->n()), FarField{});
    for (std::size_t i = 0; i < g->n(); ++i) e.values[i] = std::exp(0.5 * g->nodes[i]);
    Field w = to_weighted(e, 1.0);
    for (double x : w.values) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("round trip at c = 2") {
    Field w = from_weighted(to_weighted(f, 2.0), 2.0);
    CHECK(sup_diff(w.values, f.values) <= 1e-14 * (1.0 + sup_norm(f.values)));
  }
  SUBCASE("overflow guard") {
    auto big = std::make_shared<Grid1D>(Grid1D::uniform(100.0, 64));
    Field h(big, Vec(64, 1.0), FarField{});
    CHECK_THROWS_AS(from_weighted(h, 20.0), std::range_error);
  }
}

TEST_CASE("derivative sampling is second order") {
  auto g = std::make_shared<Grid1D>(Grid1D::tanh_clustered(5.0, 256, 2.0));
  Vec v(g->n());
  for (std::size_t i = 0; i < g->n(); ++i) v[i] = std::sin(g->nodes[i]);
  Vec d = derivative_samples(*g, v);
  for (std::size_t i = 0; i < g->n(); ++i)
    CHECK(d[i] == doctest::Approx(std::cos(g->nodes[i])).epsilon(5e-3));
  // exact on quadratics, including the one-sided ends
  for (std::size_t i = 0; i < g->n(); ++i) {
    const double x = g->nodes[i];
    v[i] = 2.0 + 3.0 * x - 0.5 * x * x;
  }
  d = derivative_samples(*g, v);
  for (std::size_t i = 0; i < g->n(); ++i)
    CHECK(d[i] == doctest::Approx(3.0 - g->nodes[i]).epsilon(1e-9));
}

TEST_CASE("affine window fit") {
  auto g = std::make_shared<Grid1D>(Grid1D::uniform(12.0, 128));
  Field f = Field::affine(g, 0.7, -1.2);
  auto [b, k] = fit_affine_window(*g, f.values, 4.0, 10.0);
  CHECK(k == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(b == doctest::Approx(-1.2).epsilon(1e-10));
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(Params(-1.0, FluxModel::cosine(0.0)), std::invalid_argument);
}
