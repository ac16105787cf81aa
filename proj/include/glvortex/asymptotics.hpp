#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glvortex/gl_solver.hpp"
#include "glvortex/harmonic.hpp"

namespace glvortex {

// (1/n) sum_j |grad u_j*|^2 by centred differences on interior nodes (zero on
// the boundary). Throws std::invalid_argument when u_star is off the sphere
// constraint by 1e-8 or more.
ScalarField f_star_field(const MultiField& u_star);

// ||f_eps - f*|| / max(||f*||, 1e-12) in L^2 over nodes at distance >= margin
// from the boundary. Requires margin >= 2h and a nonempty subdomain.
double compare_f(const MultiField& psi_eps, double epsilon, const MultiField& u_star, double margin);

// sum_j of the boundary integral of |du_j/dnu|^2. Corner nodes are skipped;
// along each side the integrand is extended linearly to the corners and
// integrated with the trapezoid rule.
double pohozaev_boundary_integral(const MultiField& psi);

// max_j max_p |u_j - exp(i gamma_j) u_1|.
double rotation_defect(const MultiField& psi, const std::vector<double>& gammas);

// max over nodes at distance >= 2h of
// |-eps^2 lap f + 2 sum|u_j|^2 f - 2 sum |grad u_j|^2|, f = f_eps.
double f_equation_residual(const MultiField& psi, double epsilon);

struct ZeroCell {
  int i;  // lower-left node of the cell
  int j;
  int charge;
  double x;  // cell centre
  double y;
};

// Cells around which the four corner values wind once (either sense), using
// the quadrant of each value; an exact zero counts as the first quadrant.
std::vector<ZeroCell> detect_zeros(const ComplexField& component, const Grid& grid);
int total_charge(const std::vector<ZeroCell>& zeros);

enum class RecordStatus { converged, unconverged, under_resolved };
std::string to_string(RecordStatus s);

struct ContinuationRecord {
  double epsilon = 0.0;
  RecordStatus status = RecordStatus::converged;
  EnergyReport energy;
  double residual_el = 0.0;
  double sup_modulus_defect = 0.0;
  double potential_total = 0.0;
  std::vector<double> potential_per_component;
  double pohozaev = 0.0;
  double f_rel_err = 0.0;
  double rotation_defect = 0.0;  // nan unless the data is a rotation family
  std::vector<double> interior_l2_err;
  std::vector<int> zero_count;
  std::vector<int> zero_charge;
  double f_equation_residual = 0.0;
  double max_modulus_excess = 0.0;  // max over interior of sum |u_j|^2 - n
  double eps_grad_scale = 0.0;      // eps * max_j max_p |grad u_j|
  bool boundary_winding_ok = true;
  SolveStats stats;
  std::string snapshot;
};

struct ContinuationConfig {
  SolveConfig solve;
  BetaConfig beta;
  double margin = 0.1;
  bool multistart = true;  // otherwise the first solve starts from solve_init
  InitStrategy solve_init = InitStrategy::vortex_product;
  std::vector<std::vector<std::array<double, 2>>> vortex_points;  // as in InitOptions
  std::optional<std::filesystem::path> snapshot_dir;
};

struct ContinuationResult {
  std::vector<ContinuationRecord> records;
  std::vector<MultiField> fields;  // one per record
  MultiField u_star;
  bool has_u_star = false;  // false when the harmonic start cannot be projected (e.g. n = 1, d != 0)
  double beta = 0.0;
  HarmonicResidual u_star_residual;
  std::vector<double> u_star_min_modulus;  // per component
  std::vector<double> u_star_max_modulus;
  std::vector<StartOutcome> first_starts;
  std::string first_start_chosen;
  bool starts_disagree = false;
  bool basin_jump = false;  // energy fell as eps decreased, or jumped by more than 5%
  double max_energy_jump = 0.0;
  bool aborted = false;
  std::string message;
  std::vector<std::string> warnings;
};

// Solves along a strictly decreasing eps schedule, warm-starting each solve
// from the previous minimizer, then computes the constrained limit u* and
// every per-record diagnostic.
ContinuationResult continuation(const Grid& grid, const BoundaryConfig& config,
                                const std::vector<double>& eps_schedule, const ContinuationConfig& cc);

struct PotentialTrace {
  std::vector<std::pair<double, double>> series;  // (eps, (1/eps^2) int (1 - |u_j|^2)^2)
  std::string verdict;                            // diverging, bounded or inconclusive
};

// Verdict over the last three converged records: "diverging" when both steps
// grow by at least 1.3 per halving of eps.
PotentialTrace component_potential_trace(const ContinuationResult& result, int j);

// Least-squares slope of energy against log(1/eps).
double log_slope(const std::vector<double>& eps, const std::vector<double>& energy);

struct BaselineSweep {
  int component = 0;
  int degree = 0;
  std::vector<double> eps;
  std::vector<double> energy;
  std::vector<SolveStats> stats;
  double slope = 0.0;
};

// Single-component sweep for each boundary map on its own.
std::vector<BaselineSweep> baseline_sweep(const Grid& grid, const BoundaryConfig& config,
                                          const std::vector<double>& eps_schedule, const SolveConfig& solve);

void write_diagnostics_csv(std::ostream& out, const ContinuationResult& result, int n);
std::string format_double(double v);

}  // namespace glvortex
