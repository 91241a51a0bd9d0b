#ifndef HALFLINE_FLOQUET_HPP
#define HALFLINE_FLOQUET_HPP

#include <complex>

#include "halfline/stepper.hpp"

namespace halfline {

/// Monodromy operator of the linearized period map: integrates the
/// linearization of the flow over one period with boundary coefficient
/// g'(u*(0,t)) cubic-interpolated from the stored orbit trace. Matrix-free.
class Monodromy {
 public:
  /// trace_u0: boundary values at times j*dt, j = 0..nsteps (the same dt the
  /// linear steps use, so interpolation is exact at step times).
  Monodromy(std::shared_ptr<const Grid1D> grid, const ProblemSpec& spec, double dt, int nsteps,
            const Vec& trace_u0);

  void apply(Vec& w) const;
  void apply_block(std::vector<Vec>& ws) const;
  int nsteps() const { return nsteps_; }
  double dt() const { return dt_; }

 private:
  std::unique_ptr<LinearizedStepper> lin_;
  int nsteps_;
  double dt_;
};

struct FloquetResult {
  std::vector<std::complex<double>> multipliers;  // sorted by modulus, descending
  Vec leading_vector_weighted;                    // e^{-c x / 2}-weighted, normalized
  double alignment_angle = 0.0;  // radians vs -d/dt u~ at phase zero (filled by caller)
  int iterations = 0;
  bool converged = false;
};

/// Leading m eigenvalues of the monodromy by block subspace iteration in the
/// weighted inner product; v_seed (optional) is included in the start block.
FloquetResult floquet_multipliers(const Monodromy& M, int m, double c, const Grid1D& grid,
                                  const Vec* v_seed = nullptr, int max_iters = 60,
                                  double ritz_tol = 1e-12);

/// L2 angle between two vectors in the e^{-c x} trapezoid inner product
/// (the L2 angle of their weighted representatives).
double weighted_angle(const Vec& a, const Vec& b, const Grid1D& grid, double c);

}  // namespace halfline

#endif
