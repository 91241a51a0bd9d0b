#ifndef HALFLINE_VOLTERRA_HPP
#define HALFLINE_VOLTERRA_HPP

#include <functional>

#include "halfline/grid.hpp"
#include "halfline/stepper.hpp"

namespace halfline {

/// Boundary-integral reference solver built on the variation-of-constants
/// map of the symmetrized problem: the boundary trace solves
///
///   v(t) = I0(t) - 2 Int_0^t Gamma(0, t-s) [g(v(s)) - (c/2) v(s)] ds,
///
/// with Gamma the advected heat kernel. The weakly singular kernel is
/// removed exactly by the substitution q = sqrt(t-s); panels are integrated
/// with Gauss-Legendre against the piecewise-linear trace. Serves as an
/// independent oracle for evolve() on short horizons.

/// 2 Int_0^t Gamma(x, t-s) W(s) ds for a smooth prescribed W.
double flux_response(double x, double t, double c, const std::function<double(double)>& W,
                     int npanels = 256);

/// Int_0^inf (Gamma(x-y,t) + Gamma(x+y,t)) w0(y) dy for a weighted initial
/// profile w0 given as a callable, integrated to ymax.
double initial_term(double x, double t, double c, const std::function<double(double)>& w0,
                    double ymax, int npanels = 512);

/// Evolve via the boundary Volterra equation. Snapshots are reconstructed on
/// the grid of u0 by kernel quadrature. dt = 0 picks a step from the
/// contraction bound of the fixed-point map; non-contraction triggers a
/// restart with half the step.
Trajectory evolve_volterra(const Params& p, const Field& u0, double t_end, double dt = 0.0,
                           std::size_t n_snapshots = 5);

}  // namespace halfline

#endif
