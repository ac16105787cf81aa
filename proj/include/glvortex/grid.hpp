#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace glvortex {

using Complex = std::complex<double>;
using ScalarField = std::vector<double>;

// Complex nodal values kept as two real planes.
struct ComplexField {
  std::vector<double> re;
  std::vector<double> im;

  ComplexField() = default;
  explicit ComplexField(std::size_t count, Complex fill = {0.0, 0.0})
      : re(count, fill.real()), im(count, fill.imag()) {}

  std::size_t size() const { return re.size(); }
  Complex operator[](std::size_t k) const { return {re[k], im[k]}; }
  void set(std::size_t k, Complex z) {
    re[k] = z.real();
    im[k] = z.imag();
  }
};

struct BoundaryNode {
  std::size_t index;  // node index into the lattice
  int i;              // x index
  int j;              // y index
  double t;           // perimeter fraction in [0, 1)
  bool corner;
};

// Node lattice over the unit square: (n_cells + 1)^2 nodes, row-major with
// the x index fastest. Boundary nodes are listed counterclockwise from (0, 0).
class Grid {
 public:
  explicit Grid(int n_cells);

  int n_cells() const { return n_cells_; }
  int side() const { return n_cells_ + 1; }
  double h() const { return h_; }
  std::size_t node_count() const { return static_cast<std::size_t>(side()) * side(); }
  std::size_t interior_count() const {
    return static_cast<std::size_t>(n_cells_ - 1) * (n_cells_ - 1);
  }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * side() + static_cast<std::size_t>(i);
  }
  int i_of(std::size_t idx) const { return static_cast<int>(idx % side()); }
  int j_of(std::size_t idx) const { return static_cast<int>(idx / side()); }
  double x(int i) const { return i * h_; }
  double y(int j) const { return j * h_; }

  bool is_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n_cells_ || j == n_cells_;
  }
  bool is_boundary(std::size_t idx) const { return is_boundary(i_of(idx), j_of(idx)); }
  bool is_corner(int i, int j) const {
    return (i == 0 || i == n_cells_) && (j == 0 || j == n_cells_);
  }

  // Trapezoid weight: h^2 inside, h^2/2 on edges, h^2/4 at corners.
  double weight(int i, int j) const {
    const double wx = (i == 0 || i == n_cells_) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == n_cells_) ? 0.5 : 1.0;
    return wx * wy * h_ * h_;
  }

  const std::vector<BoundaryNode>& boundary_order() const { return boundary_; }

  // Distance from node (i, j) to the nearest side of the square.
  double distance_to_boundary(int i, int j) const;

 private:
  int n_cells_;
  double h_;
  std::vector<BoundaryNode> boundary_;
};

Grid build_grid(int n_cells);

// Five-point Laplacian on interior nodes; boundary entries are zero.
ScalarField laplacian(const Grid& grid, std::span<const double> f);
ComplexField laplacian(const Grid& grid, const ComplexField& f);

// Trapezoid quadrature over the unit square with a fixed summation order.
double integrate(const Grid& grid, std::span<const double> f);

struct NormalDerivative {
  Complex value;
  bool corner;  // value is the average of the two one-sided normals
};

// Outward normal derivative at boundary_order()[boundary_index] using the
// second-order one-sided stencil along the inward lattice line.
NormalDerivative normal_derivative(const Grid& grid, const ComplexField& f,
                                   std::size_t boundary_index);

}  // namespace glvortex
