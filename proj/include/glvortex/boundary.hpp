#pragma once

#include <optional>
#include <span>
#include <vector>

#include "glvortex/grid.hpp"

namespace glvortex {

// One term a * sin(2 pi k t + phase) of the boundary phase perturbation.
struct PhaseTerm {
  int frequency = 0;
  double amplitude = 0.0;
  double phase = 0.0;
};

// g(t) = exp(i (2 pi degree t + psi(t))) on the perimeter fraction t in [0, 1),
// with psi(t) = offset + sum of the sine terms.
struct BoundaryMap {
  int degree = 0;
  std::vector<PhaseTerm> psi;
  double offset = 0.0;

  double perturbation(double t) const;
};

struct BoundaryConfig {
  std::vector<BoundaryMap> maps;

  int n() const { return static_cast<int>(maps.size()); }
  // Throws std::invalid_argument for an empty config or a negative degree.
  void validate() const;
};

Complex evaluate_g(const BoundaryMap& map, double t);

// g sampled along grid.boundary_order().
std::vector<Complex> sample_boundary(const Grid& grid, const BoundaryMap& map);

// Degree of a closed loop of nonzero samples (the last sample connects back to
// the first). Throws LoopThroughZero or UndersampledLoop.
int winding_number(std::span<const Complex> loop);

// Continuous phase along an open chain of unit samples with zero winding.
// Throws NoGlobalLift when the closed loop winds.
std::vector<double> lift_phase(std::span<const Complex> samples);

struct HarmonicOptions {
  double tolerance = 1e-10;  // max-norm of h^2 * lap(u), relative to the data scale
  int max_iterations = 0;    // 0: 50 * n_cells + 1000
};

// Discrete harmonic function with the given values on boundary_order().
ScalarField harmonic_extension(const Grid& grid, std::span<const double> boundary_values,
                               const HarmonicOptions& options = {});
ComplexField harmonic_extension(const Grid& grid, std::span<const Complex> boundary_values,
                                const HarmonicOptions& options = {});

// gamma_j with g_j = exp(i gamma_j) g_1 on every boundary node, when the data
// is such a rotation family (gamma_1 = 0).
std::optional<std::vector<double>> rotation_gammas(const Grid& grid, const BoundaryConfig& config,
                                                   double tolerance = 1e-12);

}  // namespace glvortex

namespace glvortex {

// Per-component boundary samples along boundary_order().
using BoundarySamples = std::vector<std::vector<Complex>>;

BoundarySamples sample_all(const Grid& grid, const BoundaryConfig& config);

}  // namespace glvortex
