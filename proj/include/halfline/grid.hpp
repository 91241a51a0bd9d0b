#ifndef HALFLINE_GRID_HPP
#define HALFLINE_GRID_HPP

#include <memory>

#include "halfline/common.hpp"
#include "halfline/flux.hpp"

namespace halfline {

/// Truncated spatial mesh on [0, L], strictly increasing, nodes[0] = 0,
/// nodes[n-1] = L, n >= 8.
struct Grid1D {
  enum class Stretching { uniform, tanh_clustered_at_0 };

  Vec nodes;
  Stretching stretching = Stretching::uniform;

  std::size_t n() const { return nodes.size(); }
  double length() const { return nodes.back(); }

  static Grid1D uniform(double L, std::size_t n);
  /// tanh map clustering nodes at x = 0; alpha controls the contrast
  /// between the first and last spacing (alpha ~ 2-3 gives ~10-100x).
  static Grid1D tanh_clustered(double L, std::size_t n, double alpha = 2.5);
};

/// Default truncation length: L = max(10, 12/c) for c > 0, L = 6 sqrt(t_max)
/// for c = 0 (weighted tails decay like e^{-c x / 2}, diffusive spreading
/// like sqrt(t)).
double default_truncation(double c, double t_max);

/// Sampled solution profile with affine far-field metadata
/// (u ~ strain * x + intercept beyond the truncation).
struct FarField {
  double strain = 0.0;
  double intercept = 0.0;
};

struct Field {
  std::shared_ptr<const Grid1D> grid;
  Vec values;
  FarField farfield;

  Field() = default;
  Field(std::shared_ptr<const Grid1D> g, Vec v, FarField ff = {});

  std::size_t n() const { return values.size(); }

  static Field constant(std::shared_ptr<const Grid1D> g, double value);
  /// u(x) = strain * x + intercept
  static Field affine(std::shared_ptr<const Grid1D> g, double strain, double intercept);
};

/// Problem parameters: advection speed c >= 0 and boundary flux.
struct Params {
  double c = 0.0;
  FluxModel flux = FluxModel::cosine(0.0);

  Params(double c_, FluxModel f) : c(c_), flux(std::move(f)) {
    if (!(c >= 0.0)) throw std::invalid_argument("Params: requires c >= 0");
  }
};

/// Weighted representative u~(x) = e^{-c x / 2} u(x) of the symmetrized
/// problem; from_weighted inverts it. The far-field metadata always refers
/// to the unweighted field and is carried through unchanged.
/// from_weighted throws std::range_error when e^{+c x / 2} would overflow.
Field to_weighted(const Field& u, double c);
Field from_weighted(const Field& u_weighted, double c);

/// Second-order one-sided derivative at x = 0 (three leftmost nodes).
double boundary_derivative(const Grid1D& g, const Vec& values);

/// Second-order derivative samples at every node (one-sided at the ends).
Vec derivative_samples(const Grid1D& g, const Vec& values);

/// Least-squares affine fit of values over x in [x_lo, x_hi]; returns
/// {intercept, slope}.
std::pair<double, double> fit_affine_window(const Grid1D& g, const Vec& values, double x_lo,
                                            double x_hi);

}  // namespace halfline

#endif
