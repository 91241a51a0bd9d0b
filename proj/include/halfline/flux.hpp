#ifndef HALFLINE_FLUX_HPP
#define HALFLINE_FLUX_HPP

#include <memory>

#include "halfline/common.hpp"

namespace halfline {

/// Boundary flux nonlinearity g with gauge period 2*pi, g(u + 2*pi) = g(u).
///
/// Three kinds:
///   - cosine(theta):  g(u) = 1 + theta * cos(u), exact gauge periodicity;
///   - table(samples): periodic cubic interpolant of samples on an equispaced
///     lattice over [0, 2*pi), at least 8 samples;
///   - affine_shift(base, offset): g(u) = base(u) + offset.
///
/// The reference normalization has max g = 1 + |theta| and min g = 1 - |theta|
/// attained at u = pi; table inputs violating it are accepted but flagged
/// (see normalized()).
class FluxModel {
 public:
  enum class Kind { cosine, table, affine_shift };

  static FluxModel cosine(double theta);
  static FluxModel table(const Vec& samples);
  static FluxModel affine_shift(FluxModel base, double offset);

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }
  double offset() const { return offset_; }
  const FluxModel& base() const { return *base_; }
  const Vec& samples() const { return samples_; }

  /// g(u); throws std::invalid_argument on non-finite u.
  double eval(double u) const;
  /// g'(u)
  double deriv(double u) const;
  /// g''(u)
  double deriv2(double u) const;

  /// min / max of g over one gauge period (sampled + local refinement).
  double min_value() const;
  double max_value() const;

  /// True when the flux matches the reference normalization
  /// (mean of extrema equal 1, minimum at u = pi) within a loose tolerance.
  bool normalized() const;

 private:
  FluxModel() = default;

  Kind kind_ = Kind::cosine;
  double theta_ = 0.0;
  double offset_ = 0.0;
  std::shared_ptr<const FluxModel> base_;
  // periodic cubic spline data (table kind)
  Vec samples_;
  Vec second_derivs_;
  double h_ = 0.0;
};

double flux_eval(const FluxModel& f, double u);
double flux_deriv(const FluxModel& f, double u);

}  // namespace halfline

#endif
