#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "halfline/flux.hpp"

using namespace halfline;

TEST_CASE("cosine flux values") {
  FluxModel f = FluxModel::cosine(0.5);
  CHECK(flux_eval(f, pi) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(flux_eval(f, 2.0 * pi + pi / 3.0) == doctest::Approx(1.25).epsilon(1e-14));
  FluxModel f0 = FluxModel::cosine(0.0);
  for (double u : {-7.0, 0.0, 2.5, 100.0}) CHECK(flux_eval(f0, u) == 1.0);
  CHECK(f.min_value() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.max_value() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("gauge periodicity") {
  FluxModel f = FluxModel::cosine(0.7);
  for (int i = 0; i < 64; ++i) {
    const double u = -5.0 + 10.0 * i / 64.0;
    CHECK(std::abs(f.eval(u + two_pi) - f.eval(u)) <= 1e-14);
  }
  // table kind: sampled sine-like flux
  Vec samples(64);
  for (std::size_t j = 0; j < samples.size(); ++j)
    samples[j] = 1.0 + 0.3 * std::cos(two_pi * j / samples.size());
  FluxModel t = FluxModel::table(samples);
  for (int i = 0; i < 64; ++i) {
    const double u = -5.0 + 10.0 * i / 64.0;
    CHECK(std::abs(t.eval(u + two_pi) - t.eval(u)) <= 1e-12);
  }
}

TEST_CASE("table interpolates to spline accuracy") {
  Vec samples(128);
  for (std::size_t j = 0; j < samples.size(); ++j)
    samples[j] = 1.0 + 0.5 * std::cos(two_pi * j / samples.size());
  FluxModel t = FluxModel::table(samples);
  FluxModel ref = FluxModel::cosine(0.5);
  for (int i = 0; i <= 200; ++i) {
    const double u = two_pi * i / 200.0;
    CHECK(t.eval(u) == doctest::Approx(ref.eval(u)).epsilon(1e-7));
    CHECK(t.deriv(u) == doctest::Approx(ref.deriv(u)).epsilon(1e-5));
  }
}

TEST_CASE("derivatives match centered differences") {
  Vec samples(64);
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double u = two_pi * j / samples.size();
    samples[j] = 1.0 + 0.4 * std::cos(u) + 0.1 * std::sin(2.0 * u);
  }
  for (FluxModel f : {FluxModel::cosine(0.8), FluxModel::table(samples),
                      FluxModel::affine_shift(FluxModel::cosine(1.5), -0.25)}) {
    const double h = 1e-5;
    for (int i = 0; i < 40; ++i) {
      const double u = two_pi * i / 40.0 + 0.013;
      const double fd1 = (f.eval(u + h) - f.eval(u - h)) / (2.0 * h);
      const double fd2 = (f.eval(u + h) - 2.0 * f.eval(u) + f.eval(u - h)) / (h * h);
      CHECK(f.deriv(u) == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(f.deriv2(u) == doctest::Approx(fd2).epsilon(2e-4));
    }
  }
}

TEST_CASE("affine shift composes") {
  FluxModel f = FluxModel::affine_shift(FluxModel::cosine(2.0), -3.0);  // 2 cos(u) - 2
  CHECK(f.eval(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.eval(pi) == doctest::Approx(-4.0).epsilon(1e-15));
  CHECK(f.deriv(0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f.deriv2(0.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("input validation") {
  FluxModel f = FluxModel::cosine(0.5);
  CHECK_THROWS_AS(f.eval(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  CHECK_THROWS_AS(FluxModel::table(Vec{1, 2, 3}), std::invalid_argument);
}

TEST_CASE("normalization flag for table inputs") {
  // normalized: min at pi, extrema mean 1
  Vec good(64), off(64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double u = two_pi * j / 64.0;
    good[j] = 1.0 + 0.5 * std::cos(u);
    off[j] = 1.3 + 0.5 * std::cos(u - 0.8);
  }
  CHECK(FluxModel::table(good).normalized());
  CHECK_FALSE(FluxModel::table(off).normalized());
  CHECK(FluxModel::cosine(0.9).normalized());
}
