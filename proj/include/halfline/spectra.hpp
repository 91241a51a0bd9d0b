#ifndef HALFLINE_SPECTRA_HPP
#define HALFLINE_SPECTRA_HPP

#include <Eigen/Dense>

#include <functional>

#include "halfline/common.hpp"

namespace halfline {

/// Eigenvalues (ascending) of -d^2/dx^2 + V(x) on [0, L] with a Robin
/// condition psi'(0) = kappa psi(0) and a Dirichlet condition at L, uniform
/// second-order finite differences symmetrized with a half-cell at the Robin
/// end. Optionally the first m eigenvectors (node values at xs).
inline std::vector<double> robin_schrodinger_eigs(const std::function<double(double)>& V,
                                                  double kappa, double L, int n, int m,
                                                  std::vector<Vec>* vecs = nullptr,
                                                  Vec* xs = nullptr) {
  const double h = L / n;
  Eigen::VectorXd dia(n), sub(n - 1);
  // generalized problem A psi = mu B psi with B = diag(1/2, 1, ..., 1),
  // reduced to standard form by B^{-1/2} A B^{-1/2}
  dia[0] = 2.0 / (h * h) + 2.0 * kappa / h + V(0.0);
  sub[0] = -std::sqrt(2.0) / (h * h);
  for (int j = 1; j < n; ++j) {
    dia[j] = 2.0 / (h * h) + V(j * h);
    if (j < n - 1) sub[j] = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(dia, sub,
                            vecs ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  std::vector<double> eigs(es.eigenvalues().data(), es.eigenvalues().data() + n);
  if (vecs) {
    vecs->clear();
    for (int j = 0; j < std::min(m, n); ++j) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = es.eigenvectors()(i, j);
      v[0] *= std::sqrt(2.0);  // undo the half-cell scaling
      vecs->push_back(std::move(v));
    }
  }
  if (xs) {
    xs->resize(n);
    for (int i = 0; i < n; ++i) (*xs)[i] = i * h;
  }
  if (static_cast<int>(eigs.size()) > m) eigs.resize(m);
  return eigs;
}

/// Richardson extrapolation of a second-order quantity over a refinement
/// pair (h and h/2 values).
inline double richardson2(double coarse, double fine) { return fine + (fine - coarse) / 3.0; }

}  // namespace halfline

#endif
