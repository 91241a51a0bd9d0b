#include "halfline/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace halfline {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(ldab_ * n, 0.0), piv_(n, 0) {
  if (n < 1 || kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: bad dimensions");
}

void BandedMatrix::clear() {
  std::fill(ab_.begin(), ab_.end(), 0.0);
  factorized_ = false;
}

double& BandedMatrix::at(int i, int j) { return ab_[j * ldab_ + kl_ + ku_ + i - j]; }
double BandedMatrix::at(int i, int j) const { return ab_[j * ldab_ + kl_ + ku_ + i - j]; }

void BandedMatrix::set(int i, int j, double v) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_)
    throw std::out_of_range("BandedMatrix::set outside band");
  at(i, j) = v;
}

void BandedMatrix::add(int i, int j, double v) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_)
    throw std::out_of_range("BandedMatrix::add outside band");
  at(i, j) += v;
}

double BandedMatrix::get(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > kl_ + ku_) return 0.0;
  return at(i, j);
}

void BandedMatrix::factorize() {
  // unblocked gbtf2 with partial pivoting; fill widens the upper band to
  // kl + ku
  const int bw = kl_ + ku_;
  for (int j = 0; j < n_; ++j) {
    const int km = std::min(kl_, n_ - 1 - j);
    int p = 0;
    double pmax = std::abs(at(j, j));
    for (int i = 1; i <= km; ++i) {
      const double v = std::abs(at(j + i, j));
      if (v > pmax) {
        pmax = v;
        p = i;
      }
    }
    piv_[j] = j + p;
    if (pmax == 0.0) throw std::runtime_error("BandedMatrix: singular factor");
    if (p > 0) {
      const int jhi = std::min(n_ - 1, j + bw);
      for (int jj = j; jj <= jhi; ++jj) std::swap(at(j, jj), at(j + p, jj));
    }
    const double pivot = at(j, j);
    for (int i = 1; i <= km; ++i) {
      const double m = at(j + i, j) / pivot;
      at(j + i, j) = m;
      const int jhi = std::min(n_ - 1, j + bw);
      for (int jj = j + 1; jj <= jhi; ++jj) at(j + i, jj) -= m * at(j, jj);
    }
  }
  factorized_ = true;
}

void BandedMatrix::solve(Vec& b) const {
  if (!factorized_) throw std::logic_error("BandedMatrix::solve before factorize");
  if (static_cast<int>(b.size()) != n_) throw std::invalid_argument("BandedMatrix::solve size");
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const int km = std::min(kl_, n_ - 1 - j);
    for (int i = 1; i <= km; ++i) b[j + i] -= at(j + i, j) * b[j];
  }
  const int bw = kl_ + ku_;
  for (int j = n_ - 1; j >= 0; --j) {
    const int jhi = std::min(n_ - 1, j + bw);
    double s = b[j];
    for (int jj = j + 1; jj <= jhi; ++jj) s -= at(j, jj) * b[jj];
    b[j] = s / at(j, j);
  }
}

}  // namespace halfline
