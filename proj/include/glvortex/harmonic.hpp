#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glvortex/multifield.hpp"

namespace glvortex {

// w_j = sqrt(n) v_j / (sum_k |v_k|^2)^(1/2) at every node. Throws
// ProjectionUndefined when the total modulus at a node is at most 1e-10.
MultiField project_sphere(const MultiField& psi);

struct HarmonicResidual {
  double residual = 0.0;   // max_j, interior |lap u_j + (1/n) u_j sum_k |grad u_k|^2|
  double deviation = 0.0;  // max over nodes of |sum_j |u_j|^2 - n|
};

// |grad u_k|^2 uses the edge form matching the five-point Laplacian, which makes
// (1/n) sum_k |grad u_k|^2 the exact discrete multiplier of the constraint.
HarmonicResidual residual_harmonic(const MultiField& psi);

struct BetaConfig {
  double tol = 1e-8;  // on residual_harmonic().residual
  int max_iters = 20000;
  double tau0 = 0.0;  // initial step; 0 means 10 h
  double growth = 1.5;
  double backtrack = 0.5;
  double tau_max = 1e6;
};

struct BetaResult {
  MultiField field;
  double beta = 0.0;  // energy_dirichlet(field)
  HarmonicResidual residual;
  int iterations = 0;
  bool converged = false;
  std::size_t chosen_start = 0;
  std::vector<double> start_energies;
  bool starts_disagree = false;
};

// Projected gradient flow for the Dirichlet energy over fields with
// sum_j |u_j|^2 = n and the given boundary data. The first start is always the
// projected harmonic extension; extra_starts are projected and pinned first.
BetaResult solve_beta(const Grid& grid, const BoundaryConfig& config, const BetaConfig& beta_config = {},
                      const std::vector<MultiField>& extra_starts = {});

// Projected flow from a single start already in the constraint set.
BetaResult solve_beta_from(const MultiField& start, const BoundarySamples& samples, const BetaConfig& config);

struct AlphaResult {
  MultiField field;
  double alpha = 0.0;
  std::vector<std::vector<double>> phases;  // phase per component and node
  int newton_iterations = 0;
};

// Minimizes the discrete Dirichlet energy over componentwise unit-modulus maps.
// Throws AlphaUndefined unless every degree is zero.
AlphaResult solve_alpha(const Grid& grid, const BoundaryConfig& config);

struct AlphaBetaReport {
  std::optional<double> alpha;
  double beta = 0.0;
  std::optional<double> gap;
  MultiField minimizer_beta;
  std::optional<MultiField> minimizer_alpha;
  HarmonicResidual beta_residual;
  bool beta_converged = false;
  bool starts_disagree = false;
  // max_p,j,k ||grad u_j| - |grad u_k|| over interior nodes of the beta
  // minimizer, divided by the mean gradient modulus.
  double gradient_mismatch = 0.0;
  std::string alpha_text() const;  // number or "undefined (nonzero degree)"
};

AlphaBetaReport alpha_beta(const Grid& grid, const BoundaryConfig& config, const BetaConfig& beta_config = {});

// Smallest eigenvalue of the five-point Dirichlet Laplacian by inverse power iteration.
double lambda1(const Grid& grid, double tolerance = 1e-10, int max_iterations = 500);

// 2 (2 - 2 cos(pi h)) / h^2.
double lambda1_closed_form(const Grid& grid);

// sqrt(n / lambda1(grid)).
double rotation_threshold(int n, const Grid& grid);

}  // namespace glvortex
