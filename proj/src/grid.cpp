#include "halfline/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace halfline {

namespace {
void validate(const Grid1D& g) {
  if (g.n() < 8) throw std::invalid_argument("Grid1D: requires n >= 8");
  if (g.nodes.front() != 0.0) throw std::invalid_argument("Grid1D: nodes[0] must be 0");
  for (std::size_t i = 1; i < g.n(); ++i)
    if (!(g.nodes[i] > g.nodes[i - 1]))
      throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
}
}  // namespace

Grid1D Grid1D::uniform(double L, std::size_t n) {
  if (!(L > 0.0)) throw std::invalid_argument("Grid1D: requires L > 0");
  Grid1D g;
  g.stretching = Stretching::uniform;
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i] = L * static_cast<double>(i) / (n - 1);
  g.nodes.back() = L;
  validate(g);
  return g;
}

Grid1D Grid1D::tanh_clustered(double L, std::size_t n, double alpha) {
  if (!(L > 0.0)) throw std::invalid_argument("Grid1D: requires L > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("Grid1D: requires alpha > 0");
  Grid1D g;
  g.stretching = Stretching::tanh_clustered_at_0;
  g.nodes.resize(n);
  const double ta = std::tanh(alpha);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    g.nodes[i] = L * (1.0 - std::tanh(alpha * (1.0 - s)) / ta);
  }
  g.nodes.front() = 0.0;
  g.nodes.back() = L;
  validate(g);
  return g;
}

double default_truncation(double c, double t_max) {
  if (c > 0.0) return std::max(10.0, 12.0 / c);
  return 6.0 * std::sqrt(std::max(t_max, 1.0));
}

Field::Field(std::shared_ptr<const Grid1D> g, Vec v, FarField ff)
    : grid(std::move(g)), values(std::move(v)), farfield(ff) {
  if (!grid) throw std::invalid_argument("Field: null grid");
  if (values.size() != grid->n()) throw std::invalid_argument("Field: values/grid size mismatch");
  if (!std::isfinite(farfield.strain)) throw std::invalid_argument("Field: non-finite strain");
}

Field Field::constant(std::shared_ptr<const Grid1D> g, double value) {
  Vec v(g->n(), value);
  return Field(std::move(g), std::move(v), FarField{0.0, value});
}

Field Field::affine(std::shared_ptr<const Grid1D> g, double strain, double intercept) {
  Vec v(g->n());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = strain * g->nodes[i] + intercept;
  return Field(std::move(g), std::move(v), FarField{strain, intercept});
}

Field to_weighted(const Field& u, double c) {
  Field w = u;
  for (std::size_t i = 0; i < w.n(); ++i) w.values[i] *= std::exp(-0.5 * c * u.grid->nodes[i]);
  return w;
}

Field from_weighted(const Field& u_weighted, double c) {
  const double arg_max = 0.5 * c * u_weighted.grid->length();
  if (arg_max > 700.0)
    throw std::range_error(
        "from_weighted: e^{c x / 2} overflows at the truncation; shrink L (or reduce c)");
  Field u = u_weighted;
  for (std::size_t i = 0; i < u.n(); ++i) u.values[i] *= std::exp(0.5 * c * u.grid->nodes[i]);
  return u;
}

double boundary_derivative(const Grid1D& g, const Vec& values) {
  const double h1 = g.nodes[1] - g.nodes[0];
  const double h2 = g.nodes[2] - g.nodes[1];
  const double a0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
  const double a1 = (h1 + h2) / (h1 * h2);
  const double a2 = -h1 / (h2 * (h1 + h2));
  return a0 * values[0] + a1 * values[1] + a2 * values[2];
}

Vec derivative_samples(const Grid1D& g, const Vec& values) {
  const std::size_t n = g.n();
  Vec d(n);
  d[0] = boundary_derivative(g, values);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = g.nodes[i] - g.nodes[i - 1];
    const double hp = g.nodes[i + 1] - g.nodes[i];
    d[i] = (-hp / (hm * (hm + hp))) * values[i - 1] + ((hp - hm) / (hm * hp)) * values[i] +
           (hm / (hp * (hm + hp))) * values[i + 1];
  }
  const double h1 = g.nodes[n - 1] - g.nodes[n - 2];
  const double h2 = g.nodes[n - 2] - g.nodes[n - 3];
  d[n - 1] = (2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[n - 1] -
             (h1 + h2) / (h1 * h2) * values[n - 2] + h1 / (h2 * (h1 + h2)) * values[n - 3];
  return d;
}

std::pair<double, double> fit_affine_window(const Grid1D& g, const Vec& values, double x_lo,
                                            double x_hi) {
  Vec xs, ys;
  for (std::size_t i = 0; i < g.n(); ++i) {
    if (g.nodes[i] >= x_lo && g.nodes[i] <= x_hi) {
      xs.push_back(g.nodes[i]);
      ys.push_back(values[i]);
    }
  }
  return linear_fit(xs, ys);
}

}  // namespace halfline
