#ifndef HALFLINE_COMMON_HPP
#define HALFLINE_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace halfline {

using Vec = std::vector<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Gauge period of the boundary flux, g(u + gauge) = g(u).
inline constexpr double gauge = two_pi;

inline double sup_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_diff(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Least-squares fit y ~ a + b*x. Returns {a, b}.
inline std::pair<double, double> linear_fit(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: bad input");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
  double b = (n * sxy - sx * sy) / denom;
  double a = (sy - b * sx) / n;
  return {a, b};
}

}  // namespace halfline

#endif
