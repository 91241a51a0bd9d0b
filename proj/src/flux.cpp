#include "halfline/flux.hpp"

#include <cmath>
#include <stdexcept>

namespace halfline {

namespace {

void check_arg(double u) {
  if (!std::isfinite(u)) throw std::invalid_argument("flux: non-finite argument");
}

double wrap(double u) {
  double w = std::fmod(u, two_pi);
  if (w < 0) w += two_pi;
  return w;
}

// Periodic cyclic tridiagonal solve (constant coefficients sub=sup=off,
// diag=d, wrap corners = off) via Sherman-Morrison on top of Thomas.
Vec cyclic_solve(double d, double off, const Vec& rhs) {
  const std::size_t n = rhs.size();
  auto thomas = [&](double d0, double dn, const Vec& b) {
    Vec c(n, 0.0), x(n, 0.0);
    double diag = d0;
    c[0] = off / diag;
    x[0] = b[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
      diag = (i == n - 1 ? dn : d) - off * c[i - 1];
      c[i] = off / diag;
      x[i] = (b[i] - off * x[i - 1]) / diag;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
  };
  const double gamma = -d;
  Vec u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = off;
  Vec y = thomas(d - gamma, d - off * off / gamma, rhs);
  Vec z = thomas(d - gamma, d - off * off / gamma, u);
  const double fact = (y[0] + off * y[n - 1] / gamma) / (1.0 + z[0] + off * z[n - 1] / gamma);
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - fact * z[i];
  return x;
}

}  // namespace

FluxModel FluxModel::cosine(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("flux: non-finite theta");
  FluxModel f;
  f.kind_ = Kind::cosine;
  f.theta_ = theta;
  return f;
}

FluxModel FluxModel::table(const Vec& samples) {
  if (samples.size() < 8) throw std::invalid_argument("flux: table kind requires >= 8 samples");
  if (!all_finite(samples)) throw std::invalid_argument("flux: non-finite samples");
  FluxModel f;
  f.kind_ = Kind::table;
  f.samples_ = samples;
  const std::size_t m = samples.size();
  f.h_ = two_pi / static_cast<double>(m);
  // Periodic cubic spline: second derivatives M solve
  //   (h/6) M_{j-1} + (2h/3) M_j + (h/6) M_{j+1} = (y_{j+1} - 2 y_j + y_{j-1}) / h
  Vec rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double ym = samples[(j + m - 1) % m];
    const double yp = samples[(j + 1) % m];
    rhs[j] = (yp - 2.0 * samples[j] + ym) / f.h_;
  }
  f.second_derivs_ = cyclic_solve(2.0 * f.h_ / 3.0, f.h_ / 6.0, rhs);
  return f;
}

FluxModel FluxModel::affine_shift(FluxModel base, double offset) {
  if (!std::isfinite(offset)) throw std::invalid_argument("flux: non-finite offset");
  FluxModel f;
  f.kind_ = Kind::affine_shift;
  f.offset_ = offset;
  f.base_ = std::make_shared<FluxModel>(std::move(base));
  return f;
}

double FluxModel::eval(double u) const {
  check_arg(u);
  switch (kind_) {
    case Kind::cosine:
      return 1.0 + theta_ * std::cos(u);
    case Kind::affine_shift:
      return base_->eval(u) + offset_;
    case Kind::table: {
      const double w = wrap(u);
      const std::size_t m = samples_.size();
      std::size_t j = std::min(static_cast<std::size_t>(w / h_), m - 1);
      const double a = (j + 1) * h_ - w, b = w - j * h_;
      const double yj = samples_[j], yj1 = samples_[(j + 1) % m];
      const double Mj = second_derivs_[j], Mj1 = second_derivs_[(j + 1) % m];
      return Mj * a * a * a / (6.0 * h_) + Mj1 * b * b * b / (6.0 * h_) +
             (yj / h_ - Mj * h_ / 6.0) * a + (yj1 / h_ - Mj1 * h_ / 6.0) * b;
    }
  }
  return 0.0;
}

double FluxModel::deriv(double u) const {
  check_arg(u);
  switch (kind_) {
    case Kind::cosine:
      return -theta_ * std::sin(u);
    case Kind::affine_shift:
      return base_->deriv(u);
    case Kind::table: {
      const double w = wrap(u);
      const std::size_t m = samples_.size();
      std::size_t j = std::min(static_cast<std::size_t>(w / h_), m - 1);
      const double a = (j + 1) * h_ - w, b = w - j * h_;
      const double yj = samples_[j], yj1 = samples_[(j + 1) % m];
      const double Mj = second_derivs_[j], Mj1 = second_derivs_[(j + 1) % m];
      return -Mj * a * a / (2.0 * h_) + Mj1 * b * b / (2.0 * h_) + (yj1 - yj) / h_ -
             (Mj1 - Mj) * h_ / 6.0;
    }
  }
  return 0.0;
}

double FluxModel::deriv2(double u) const {
  check_arg(u);
  switch (kind_) {
    case Kind::cosine:
      return -theta_ * std::cos(u);
    case Kind::affine_shift:
      return base_->deriv2(u);
    case Kind::table: {
      const double w = wrap(u);
      const std::size_t m = samples_.size();
      std::size_t j = std::min(static_cast<std::size_t>(w / h_), m - 1);
      const double a = (j + 1) * h_ - w, b = w - j * h_;
      return second_derivs_[j] * a / h_ + second_derivs_[(j + 1) % m] * b / h_;
    }
  }
  return 0.0;
}

namespace {
// Sampled extremum with one Newton polish on g'.
double extremum(const FluxModel& f, bool want_min) {
  const int n = 2048;
  double best_u = 0.0, best = f.eval(0.0);
  for (int i = 1; i < n; ++i) {
    const double u = two_pi * i / n;
    const double v = f.eval(u);
    if ((want_min && v < best) || (!want_min && v > best)) {
      best = v;
      best_u = u;
    }
  }
  for (int it = 0; it < 8; ++it) {
    const double d2 = f.deriv2(best_u);
    if (d2 == 0.0) break;
    const double step = f.deriv(best_u) / d2;
    if (!std::isfinite(step) || std::abs(step) > two_pi / n) break;
    best_u -= step;
  }
  return f.eval(best_u);
}
}  // namespace

double FluxModel::min_value() const { return extremum(*this, true); }
double FluxModel::max_value() const { return extremum(*this, false); }

bool FluxModel::normalized() const {
  if (kind_ == Kind::cosine) return true;
  const double lo = min_value(), hi = max_value();
  if (std::abs(0.5 * (lo + hi) - 1.0) > 1e-6) return false;
  // minimum should sit at u = pi
  const int n = 2048;
  double umin = 0.0, best = eval(0.0);
  for (int i = 1; i < n; ++i) {
    const double u = two_pi * i / n;
    if (eval(u) < best) {
      best = eval(u);
      umin = u;
    }
  }
  return std::abs(umin - pi) < 1e-2;
}

double flux_eval(const FluxModel& f, double u) { return f.eval(u); }
double flux_deriv(const FluxModel& f, double u) { return f.deriv(u); }

}  // namespace halfline
