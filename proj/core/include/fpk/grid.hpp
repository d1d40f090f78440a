#ifndef FPK_GRID_HPP
#define FPK_GRID_HPP

#include <memory>
#include <vector>

#include "fpk/errors.hpp"
#include "fpk/util.hpp"

namespace fpk {

/// Uniform cell-centered grid on the box [-r_dom, r_dom]^d. n is odd so one
/// cell center sits at the origin.
class Grid {
public:
  Grid(int d, double r_dom, int n);

  int dim() const { return d_; }
  int n_per_dim() const { return n_; }
  int cell_count() const { return d_ == 1 ? n_ : n_ * n_; }
  double half_width() const { return r_dom_; }
  double spacing() const { return h_; }
  double cell_volume() const { return d_ == 1 ? h_ : h_ * h_; }
  double total_volume() const { return static_cast<double>(cell_count()) * cell_volume(); }

  double axis(int i) const { return axis_[static_cast<std::size_t>(i)]; }
  int flat_index(int i, int j = 0) const { return d_ == 1 ? i : i + n_ * j; }
  Vec center(int flat) const {
    if (d_ == 1) return Vec(axis_[static_cast<std::size_t>(flat)]);
    return Vec(axis_[static_cast<std::size_t>(flat % n_)], axis_[static_cast<std::size_t>(flat / n_)]);
  }

private:
  int d_;
  double r_dom_;
  int n_;
  double h_;
  std::vector<double> axis_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(int d, double r_dom, int n);

/// One scalar value per cell center.
class GridFunction {
public:
  GridFunction() = default;
  explicit GridFunction(GridPtr grid, double fill = 0.0);
  GridFunction(GridPtr grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool all_finite() const;

private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Populate a grid function from a pointwise callable.
template <typename F>
GridFunction sample_on_grid(GridPtr grid, F&& f) {
  GridFunction g(grid);
  for (int i = 0; i < g.size(); ++i) g[i] = f(grid->center(i));
  return g;
}

// --- quadrature and norms (midpoint rule at cell centers) ---
double mass(const GridFunction& f);
double weighted_norm(const GridFunction& f, double k, double p);
double weighted_inner(const GridFunction& f, const GridFunction& g, double k);
/// sqrt( sum |grad_h f|^2 <x>^k h^d ), centered differences inside,
/// one-sided at the boundary.
double gradient_norm(const GridFunction& f, double k);

double min_value(const GridFunction& f);
double max_value(const GridFunction& f);
double linf_norm(const GridFunction& f);

}  // namespace fpk

#endif
