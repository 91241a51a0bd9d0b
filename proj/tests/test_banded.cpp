#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <random>

#include "halfline/banded.hpp"

using namespace halfline;

TEST_CASE("banded LU matches a dense solve") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 40 + trial;
    const int kl = 2, ku = 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    BandedMatrix B(n, kl, ku);
    for (int i = 0; i < n; ++i)
      for (int j = std::max(0, i - kl); j <= std::min(n - 1, i + ku); ++j) {
        double v = dist(rng);
        if (i == j) v += 3.0 * (trial % 2);  // alternate dominant / non-dominant
        A(i, j) = v;
        B.set(i, j, v);
      }
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = dist(rng);
    Eigen::VectorXd xd = A.partialPivLu().solve(rhs);
    Vec xb(rhs.data(), rhs.data() + n);
    B.factorize();
    B.solve(xb);
    for (int i = 0; i < n; ++i) CHECK(xb[i] == doctest::Approx(xd(i)).epsilon(1e-9));
  }
}

TEST_CASE("band bounds are enforced") {
  BandedMatrix B(10, 2, 2);
  CHECK_THROWS_AS(B.set(0, 5, 1.0), std::out_of_range);
  CHECK_THROWS_AS(B.set(9, 3, 1.0), std::out_of_range);
}

TEST_CASE("singular matrix is reported") {
  BandedMatrix B(8, 2, 2);
  // a matrix with an identically zero column is exactly singular
  for (int i = 0; i < 8; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(7, i + 2); ++j)
      B.set(i, j, j == 4 ? 0.0 : 1.0 + i + 0.3 * j);
  CHECK_THROWS_AS(B.factorize(), std::runtime_error);
}
