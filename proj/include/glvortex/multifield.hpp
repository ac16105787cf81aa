#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glvortex/boundary.hpp"
#include "glvortex/grid.hpp"

namespace glvortex {

// n complex components on a shared grid, stored as 2n contiguous real planes
// (re_0, im_0, re_1, im_1, ...), each of grid.node_count() entries.
class MultiField {
 public:
  MultiField(const Grid& grid, int n);

  const Grid& grid() const { return grid_; }
  int n() const { return n_; }
  int planes() const { return 2 * n_; }
  std::size_t stride() const { return grid_.node_count(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> plane(int c) { return {data_.data() + c * stride(), stride()}; }
  std::span<const double> plane(int c) const { return {data_.data() + c * stride(), stride()}; }

  Complex value(int j, std::size_t p) const {
    return {data_[(2 * j) * stride() + p], data_[(2 * j + 1) * stride() + p]};
  }
  void set(int j, std::size_t p, Complex z) {
    data_[(2 * j) * stride() + p] = z.real();
    data_[(2 * j + 1) * stride() + p] = z.imag();
  }

  ComplexField component(int j) const;
  void set_component(int j, const ComplexField& f);

  // sum_j |u_j|^2 per node
  ScalarField modulus_sum() const;
  bool all_finite() const;

 private:
  Grid grid_;
  int n_;
  std::vector<double> data_;
};

// Overwrites every boundary node with the sampled boundary data.
void pin_boundary(MultiField& psi, const BoundarySamples& samples);

struct EnergyReport {
  double epsilon = 0.0;
  std::vector<double> dirichlet_per_component;  // 1/2 int |grad u_j|^2
  double dirichlet_total = 0.0;
  double potential_total = 0.0;                 // 1/(4 eps^2) int (n - sum |u_j|^2)^2
  std::vector<double> potential_per_component;  // 1/eps^2 int (1 - |u_j|^2)^2
  double total = 0.0;
};

enum class InitStrategy { harmonic, vortex_product, random };

struct InitOptions {
  InitStrategy strategy = InitStrategy::harmonic;
  std::uint64_t seed = 0;
  // Optional vortex centres per component; components without an entry get
  // d_j points on a centred regular polygon of radius 0.25 (d_j = 1: the centre).
  std::vector<std::vector<std::array<double, 2>>> vortex_points;
};

MultiField init_field(const Grid& grid, const BoundaryConfig& config, const InitOptions& options,
                      std::vector<std::string>* warnings = nullptr);

std::string to_string(InitStrategy s);

EnergyReport energy_gl(const MultiField& psi, double epsilon);

// Gradient of energy_gl with respect to the real and imaginary parts of the
// interior node values (planes as in MultiField); zero on boundary nodes.
MultiField grad_energy_gl(const MultiField& psi, double epsilon);

// sum_j int |grad u_j|^2 (no 1/2 factor).
double energy_dirichlet(const MultiField& psi);

// (n - sum_j |u_j|^2) / eps^2 per node.
ScalarField f_epsilon_field(const MultiField& psi, double epsilon);

// |grad u_j|^2 by centred differences on interior nodes, zero on the boundary.
ScalarField centered_gradient_sq(const MultiField& psi, int j);

// (1 / 2h^2) sum over the four lattice neighbours q of |u_j(q) - u_j(p)|^2 on
// interior nodes: the edge form of |grad u_j|^2 that matches the 5-point Laplacian.
ScalarField edge_gradient_sq(const MultiField& psi, int j);

}  // namespace glvortex
