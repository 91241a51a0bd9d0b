#ifndef HALFLINE_BANDED_HPP
#define HALFLINE_BANDED_HPP

#include <vector>

#include "halfline/common.hpp"

namespace halfline {

/// Banded matrix with kl sub- and ku super-diagonals, LAPACK-style band
/// storage with room for pivoting fill. Factorize once, solve many.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  int size() const { return n_; }

  void clear();
  /// A(i, j) = v; (i, j) must lie inside the declared band.
  void set(int i, int j, double v);
  void add(int i, int j, double v);
  double get(int i, int j) const;

  /// LU factorization with partial pivoting (in place). Throws on exact
  /// singularity.
  void factorize();
  /// Solve A x = b with the factors; b is overwritten by x.
  void solve(Vec& b) const;

 private:
  double& at(int i, int j);
  double at(int i, int j) const;

  int n_, kl_, ku_, ldab_;
  bool factorized_ = false;
  std::vector<double> ab_;
  std::vector<int> piv_;
};

}  // namespace halfline

#endif
