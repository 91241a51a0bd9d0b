#ifndef HALFLINE_SPECIAL_HPP
#define HALFLINE_SPECIAL_HPP

#include <functional>

#include "halfline/common.hpp"

namespace halfline {

/// Error function and its complement. Relative accuracy better than 1e-12
/// on |x| <= 8 (checked against a quadrature oracle in the test suite).
double erf_c(double x);
double erf_(double x);

/// Advected heat kernel on the whole line,
///   Gamma(x,t) = (4 pi t)^{-1/2} exp(-c^2 t / 4 - x^2 / (4 t)).
/// Throws std::domain_error for t <= 0. Even in x.
double heat_kernel(double x, double t, double c);

/// Composite Gauss-Legendre quadrature of f on [a, b] with npanels panels,
/// 5 nodes per panel (exact for polynomials of degree 9 per panel).
double integrate(const std::function<double(double)>& f, double a, double b, int npanels);

/// Brent root finder on [a, b]; requires a sign change. Tolerance on x.
double brent(const std::function<double(double)>& f, double a, double b, double xtol = 1e-13,
             int maxit = 200);

/// Slope prefactor of the small-advection strain correction,
/// -sqrt(2) * zeta(1/2) = 2.0652535...
inline constexpr double small_c_strain_prefactor = 2.0652535686;

}  // namespace halfline

#endif
