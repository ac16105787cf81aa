#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glvortex/multifield.hpp"

namespace glvortex {

struct SolveConfig {
  // Stop when h^2 * residual_el (the max-norm of the energy gradient) drops
  // below this; unset means max(1e-8, 1e-4 h^2).
  std::optional<double> tol_residual;
  int max_iters = 200000;
  std::optional<double> dt0;  // unset: 0.1 eps^2
  double backtrack = 0.5;
  double growth = 1.1;
  double dt_max = 1e8;
  std::uint64_t seed = 0;
  double inner_tolerance = 1e-3;  // relative CG tolerance of each step
  int inner_max_iterations = 0;   // 0: 40 * n_cells + 200
};

double default_tolerance(const Grid& grid);
double resolved_tolerance(const SolveConfig& config, const Grid& grid);

enum class SolveStatus { converged, not_converged, aborted };
std::string to_string(SolveStatus s);

struct TracePoint {
  int iteration;
  double energy;
  double residual;  // weighted
};

struct SolveStats {
  SolveStatus status = SolveStatus::not_converged;
  int iterations = 0;
  int rejected_steps = 0;
  long inner_iterations = 0;
  double final_residual = 0.0;  // weighted gradient max-norm
  double residual_el = 0.0;     // unweighted Euler-Lagrange residual
  EnergyReport final_energy;
  std::vector<TracePoint> energy_history;  // accepted steps, decimated
  double wall_time = 0.0;
  std::string message;
};

struct SolveResult {
  MultiField field;
  SolveStats stats;
};

// Max over components and interior nodes of |lap u_j + u_j (n - sum |u_k|^2) / eps^2|.
double residual_el(const MultiField& psi, double epsilon);

// Minimizes the discrete n-component energy from init, keeping boundary nodes fixed.
// Each step solves (I/dt + H) delta = -grad E with H the Hessian of the
// discrete energy, so small dt is a gradient-flow step and large dt a Newton
// step; steps that raise the energy are retried with a smaller dt.
SolveResult solve_gl(const MultiField& init, double epsilon, const SolveConfig& config);

struct SingleSolveResult {
  ComplexField field;
  SolveStats stats;
};

// Single-component Ginzburg-Landau energy with potential (1 - |u|^2)^2 / (4 eps^2).
SingleSolveResult solve_single_gl(const Grid& grid, const ComplexField& init, double epsilon,
                                  const SolveConfig& config);

struct StartOutcome {
  std::string label;
  SolveStats stats;
};

struct MultiStartResult {
  MultiField field;
  SolveStats stats;
  std::size_t chosen = 0;
  std::vector<StartOutcome> starts;
  bool energies_disagree = false;  // converged starts differ by more than 1e-6 relative
};

struct StartSpec {
  std::string label;
  MultiField field;
};

// Standard starts: harmonic, vortex_product, random(seed), random(seed + 1).
// vortex_points as in InitOptions.
std::vector<StartSpec> default_starts(const Grid& grid, const BoundaryConfig& config, std::uint64_t seed,
                                      std::vector<std::string>* warnings = nullptr,
                                      const std::vector<std::vector<std::array<double, 2>>>& vortex_points = {});

// Solves from every start and keeps the lowest final energy among converged
// runs (any run if none converged); ties within 1e-10 keep the earliest start.
MultiStartResult solve_gl_multistart(const std::vector<StartSpec>& starts, double epsilon,
                                     const SolveConfig& config);

}  // namespace glvortex
