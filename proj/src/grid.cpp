#include "glvortex/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "glvortex/kernels.hpp"

namespace glvortex {

Grid::Grid(int n_cells) : n_cells_(n_cells), h_(0.0) {
  if (n_cells < 4 || n_cells % 2 != 0) {
    throw std::invalid_argument("n_cells must be even and >= 4, got " + std::to_string(n_cells));
  }
  h_ = 1.0 / n_cells;
  const int n = n_cells;
  boundary_.reserve(4 * static_cast<std::size_t>(n));
  auto push = [&](int i, int j) {
    const double t = static_cast<double>(boundary_.size()) / (4.0 * n);
    boundary_.push_back({index(i, j), i, j, t, is_corner(i, j)});
  };
  for (int i = 0; i < n; ++i) push(i, 0);
  for (int j = 0; j < n; ++j) push(n, j);
  for (int i = n; i > 0; --i) push(i, n);
  for (int j = n; j > 0; --j) push(0, j);
}

double Grid::distance_to_boundary(int i, int j) const {
  const int k = std::min({i, j, n_cells_ - i, n_cells_ - j});
  return k * h_;
}

Grid build_grid(int n_cells) { return Grid(n_cells); }

ScalarField laplacian(const Grid& grid, std::span<const double> f) {
  if (f.size() != grid.node_count()) throw std::invalid_argument("laplacian: field size mismatch");
  ScalarField out(grid.node_count(), 0.0);
  kernels::active().laplacian(f.data(), out.data(), grid.n_cells(), 1.0 / (grid.h() * grid.h()));
  return out;
}

ComplexField laplacian(const Grid& grid, const ComplexField& f) {
  ComplexField out;
  out.re = laplacian(grid, f.re);
  out.im = laplacian(grid, f.im);
  return out;
}

double integrate(const Grid& grid, std::span<const double> f) {
  if (f.size() != grid.node_count()) throw std::invalid_argument("integrate: field size mismatch");
  const int n = grid.n_cells();
  const int side = grid.side();
  // Row sums first, then the weighted column sum; fixed order.
  double total = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double* row = f.data() + static_cast<std::size_t>(j) * side;
    double s = 0.5 * (row[0] + row[n]);
    for (int i = 1; i < n; ++i) s += row[i];
    total += (j == 0 || j == n) ? 0.5 * s : s;
  }
  return total * grid.h() * grid.h();
}

namespace {

// One-sided outward derivative from node (i, j) stepping inward by (di, dj).
Complex one_sided(const Grid& g, const ComplexField& f, int i, int j, int di, int dj) {
  const Complex f0 = f[g.index(i, j)];
  const Complex f1 = f[g.index(i + di, j + dj)];
  const Complex f2 = f[g.index(i + 2 * di, j + 2 * dj)];
  return (3.0 * f0 - 4.0 * f1 + f2) / (2.0 * g.h());
}

}  // namespace

NormalDerivative normal_derivative(const Grid& grid, const ComplexField& f,
                                   std::size_t boundary_index) {
  const auto& order = grid.boundary_order();
  if (boundary_index >= order.size()) throw std::out_of_range("normal_derivative: bad boundary index");
  if (f.size() != grid.node_count()) throw std::invalid_argument("normal_derivative: field size mismatch");
  const BoundaryNode& b = order[boundary_index];
  const int n = grid.n_cells();
  // Inward step for each side the node lies on.
  Complex sum{0.0, 0.0};
  int sides = 0;
  if (b.i == 0) { sum += one_sided(grid, f, b.i, b.j, 1, 0); ++sides; }
  if (b.i == n) { sum += one_sided(grid, f, b.i, b.j, -1, 0); ++sides; }
  if (b.j == 0) { sum += one_sided(grid, f, b.i, b.j, 0, 1); ++sides; }
  if (b.j == n) { sum += one_sided(grid, f, b.i, b.j, 0, -1); ++sides; }
  return {sum / static_cast<double>(sides), sides > 1};
}

}  // namespace glvortex
