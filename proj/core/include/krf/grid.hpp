#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace krf {

/// Total area of every metric in the class 2*pi*c1(CP^1).
inline constexpr double kVolume = 4.0 * std::numbers::pi;

/// Uniform grid on the momentum interval [0, 2] with an even number of cells.
class Grid {
 public:
  /// Throws ValidationError("n_cells") unless n_cells >= 32 and even.
  explicit Grid(int n_cells);

  /// Grid with the given node count (n_cells + 1).
  static Grid from_nodes(int n_nodes);

  int n_cells() const noexcept { return n_cells_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_cells_) + 1; }
  std::size_t last() const noexcept { return static_cast<std::size_t>(n_cells_); }
  std::size_t mid() const noexcept { return static_cast<std::size_t>(n_cells_ / 2); }
  double spacing() const noexcept { return 2.0 / n_cells_; }

  /// Exact at both ends and at mu = 1.
  double node(std::size_t j) const noexcept { return 2.0 * static_cast<double>(j) / n_cells_; }
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_cells_;
};

/// Throws GridMismatch when the grids differ.
void require_same_grid(const Grid& a, const Grid& b);

/// Real-valued function on the nodes of a grid.
class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField zeros(const Grid& grid);
  static ScalarField constant(const Grid& grid, double value);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return ScalarField(grid, std::move(v));
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

  double sup_norm() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

}  // namespace krf
