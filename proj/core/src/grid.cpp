#include "krf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krf/errors.hpp"

namespace krf {

Grid::Grid(int n_cells) : n_cells_(n_cells) {
  if (n_cells < 32 || n_cells % 2 != 0) {
    throw ValidationError("n_cells", "need an even cell count >= 32, got " + std::to_string(n_cells));
  }
}

Grid Grid::from_nodes(int n_nodes) {
  if (n_nodes < 33 || n_nodes % 2 == 0) {
    throw ValidationError("n_grid", "need an odd node count >= 33, got " + std::to_string(n_nodes));
  }
  return Grid(n_nodes - 1);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> mu(size());
  for (std::size_t j = 0; j < mu.size(); ++j) mu[j] = node(j);
  return mu;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (a != b) {
    throw Error(ErrorKind::GridMismatch, "grid mismatch: " + std::to_string(a.n_cells()) + " vs " +
                                             std::to_string(b.n_cells()) + " cells");
  }
}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch, "field has " + std::to_string(values_.size()) +
                                             " values for " + std::to_string(grid_.size()) + " nodes");
  }
}

ScalarField ScalarField::zeros(const Grid& grid) { return constant(grid, 0.0); }

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return ScalarField(grid, std::vector<double>(grid.size(), value));
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace krf
