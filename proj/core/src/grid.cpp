#include "fpk/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fpk/fields.hpp"

namespace fpk {

Grid::Grid(int d, double r_dom, int n) : d_(d), r_dom_(r_dom), n_(n) {
  if (d != 1 && d != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (!(r_dom > 0.0)) throw ConfigError("grid half-width must be positive");
  if (n < 3) throw ConfigError("grid needs n >= 3 cells per dimension");
  if (n % 2 == 0) throw ConfigError("grid needs odd n so a cell center sits at the origin");
  h_ = 2.0 * r_dom / n;
  axis_.resize(static_cast<std::size_t>(n));
  const int mid = (n - 1) / 2;
  for (int i = 0; i < n; ++i) axis_[static_cast<std::size_t>(i)] = (i - mid) * h_;
}

GridPtr build_grid(int d, double r_dom, int n) { return std::make_shared<const Grid>(d, r_dom, n); }

GridFunction::GridFunction(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(static_cast<std::size_t>(grid_->cell_count()), fill) {}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->cell_count())
    throw ConfigError("grid function length does not match the cell count");
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double mass(const GridFunction& f) {
  return pairwise_sum(f.values()) * f.grid().cell_volume();
}

double weighted_norm(const GridFunction& f, double k, double p) {
  if (!(p >= 1.0)) throw ConfigError("weighted_norm needs p >= 1");
  const Grid& g = f.grid();
  const double s = indexed_sum(static_cast<std::size_t>(f.size()), [&](std::size_t i) {
    const int idx = static_cast<int>(i);
    return std::pow(std::abs(f[idx]), p) * weight(g.center(idx), k);
  });
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

double weighted_inner(const GridFunction& f, const GridFunction& g, double k) {
  if (f.size() != g.size()) throw ConfigError("weighted_inner needs matching grids");
  const Grid& gr = f.grid();
  const double s = indexed_sum(static_cast<std::size_t>(f.size()), [&](std::size_t i) {
    const int idx = static_cast<int>(i);
    return f[idx] * g[idx] * weight(gr.center(idx), k);
  });
  return s * gr.cell_volume();
}

namespace {

/// Squared centered-difference gradient at cell `flat` (one-sided at walls).
double grad_sq(const GridFunction& f, int flat) {
  const Grid& g = f.grid();
  const int n = g.n_per_dim();
  const double h = g.spacing();
  const int i = g.dim() == 1 ? flat : flat % n;
  const int j = g.dim() == 1 ? 0 : flat / n;

  const auto axis_diff = [&](int idx, int stride, int pos) {
    if (pos == 0) return (f[idx + stride] - f[idx]) / h;
    if (pos == n - 1) return (f[idx] - f[idx - stride]) / h;
    return (f[idx + stride] - f[idx - stride]) / (2.0 * h);
  };

  double s = 0.0;
  const double dx = axis_diff(flat, 1, i);
  s += dx * dx;
  if (g.dim() == 2) {
    const double dy = axis_diff(flat, n, j);
    s += dy * dy;
  }
  return s;
}

}  // namespace

double gradient_norm(const GridFunction& f, double k) {
  const Grid& g = f.grid();
  const double s = indexed_sum(static_cast<std::size_t>(f.size()), [&](std::size_t i) {
    const int idx = static_cast<int>(i);
    return grad_sq(f, idx) * weight(g.center(idx), k);
  });
  return std::sqrt(s * g.cell_volume());
}

double min_value(const GridFunction& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

double max_value(const GridFunction& f) {
  return *std::max_element(f.values().begin(), f.values().end());
}

double linf_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace fpk
