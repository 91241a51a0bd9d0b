#include "halfline/special.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace halfline {

double erf_c(double x) { return std::erfc(x); }

double erf_(double x) { return std::erf(x); }

double heat_kernel(double x, double t, double c) {
  if (!(t > 0.0)) throw std::domain_error("heat_kernel: requires t > 0");
  return std::exp(-0.25 * c * c * t - 0.25 * x * x / t) / std::sqrt(4.0 * pi * t);
}

namespace {
// 5-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 5> gl_x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                        0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> gl_w = {0.2369268850561891, 0.4786286704993665,
                                        0.5688888888888889, 0.4786286704993665,
                                        0.2369268850561891};
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int npanels) {
  if (npanels < 1) throw std::invalid_argument("integrate: npanels < 1");
  const double h = (b - a) / npanels;
  double sum = 0.0;
  for (int p = 0; p < npanels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int q = 0; q < 5; ++q) s += gl_w[q] * f(mid + 0.5 * h * gl_x[q]);
    sum += 0.5 * h * s;
  }
  return sum;
}

double brent(const std::function<double(double)>& f, double a, double b, double xtol, int maxit) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("brent: no sign change on bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < maxit; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;
    } else {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double r = fb / fc, t = fa / fc;
        p = s * (2.0 * m * t * (t - r) - (b - a) * (r - 1.0));
        q = (t - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a; fc = fa; d = b - a; e = d;
    }
  }
  throw std::runtime_error("brent: no convergence");
}

}  // namespace halfline
