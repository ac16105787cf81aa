#include "glvortex/gl_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "glvortex/kernels.hpp"
#include "glvortex/linear_solver.hpp"

namespace glvortex {

double default_tolerance(const Grid& grid) { return std::max(1e-8, 1e-4 * grid.h() * grid.h()); }

double resolved_tolerance(const SolveConfig& config, const Grid& grid) {
  return config.tol_residual ? *config.tol_residual : default_tolerance(grid);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::not_converged: return "not_converged";
    case SolveStatus::aborted: return "aborted";
  }
  return "unknown";
}

namespace {

// rhs = lap u + f u on interior nodes (= -grad / h^2), zero on the boundary.
void el_residual_planes(const MultiField& psi, const ScalarField& f, std::vector<double>& out) {
  const Grid& g = psi.grid();
  const auto& k = kernels::active();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  const std::size_t stride = psi.stride();
  out.assign(psi.data().size(), 0.0);
  for (int c = 0; c < psi.planes(); ++c) {
    const double* x = psi.data().data() + c * stride;
    double* r = out.data() + c * stride;
    k.laplacian(x, r, g.n_cells(), inv_h2);
    for (int j = 1; j < g.n_cells(); ++j) {
      for (int i = 1; i < g.n_cells(); ++i) {
        const std::size_t p = g.index(i, j);
        r[p] += f[p] * x[p];
      }
    }
  }
}

double complex_max_norm(const MultiField& psi, const std::vector<double>& planes) {
  const std::size_t stride = psi.stride();
  double worst = 0.0;
  for (int j = 0; j < psi.n(); ++j) {
    const double* re = planes.data() + (2 * j) * stride;
    const double* im = planes.data() + (2 * j + 1) * stride;
    for (std::size_t p = 0; p < stride; ++p) worst = std::max(worst, std::hypot(re[p], im[p]));
  }
  return worst;
}

void record(std::vector<TracePoint>& history, int& stride, int& counter, TracePoint point) {
  if (counter++ % stride != 0) return;
  history.push_back(point);
  if (history.size() >= 4096) {
    std::vector<TracePoint> kept;
    for (std::size_t i = 0; i < history.size(); i += 2) kept.push_back(history[i]);
    history = std::move(kept);
    stride *= 2;
  }
}

}  // namespace

double residual_el(const MultiField& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("residual_el: epsilon must be positive");
  std::vector<double> r;
  el_residual_planes(psi, f_epsilon_field(psi, epsilon), r);
  return complex_max_norm(psi, r);
}

SolveResult solve_gl(const MultiField& init, double epsilon, const SolveConfig& config) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solve_gl: epsilon must be positive");
  const auto start_time = std::chrono::steady_clock::now();
  const Grid& g = init.grid();
  const double h2 = g.h() * g.h();
  const double tol = resolved_tolerance(config, g);
  if (!(tol > 0.0)) throw std::invalid_argument("solve_gl: tolerance must be positive");
  const double dt0 = config.dt0 ? *config.dt0 : 0.1 * epsilon * epsilon;
  if (!(dt0 > 0.0)) throw std::invalid_argument("solve_gl: dt0 must be positive");

  const auto& k = kernels::active();
  const std::size_t len = init.data().size();
  const std::size_t stride = init.stride();
  const double coef = 2.0 / (epsilon * epsilon);
  const double inv_h2 = 1.0 / h2;

  SolveResult out{init, {}};
  MultiField& u = out.field;
  SolveStats& stats = out.stats;
  if (!u.all_finite()) {
    stats.status = SolveStatus::aborted;
    stats.message = "non-finite initial field";
    return out;
  }

  ScalarField f = f_epsilon_field(u, epsilon);
  std::vector<double> rhs;
  el_residual_planes(u, f, rhs);
  double res = h2 * complex_max_norm(u, rhs);
  double energy = energy_gl(u, epsilon).total;
  double dt = dt0;

  std::vector<double> delta(len), inv_diag(len);
  MultiField trial(u);
  int history_stride = 1, history_counter = 0;
  record(stats.energy_history, history_stride, history_counter, {0, energy, res});

  CgOptions cg;
  cg.relative_tolerance = config.inner_tolerance;
  cg.max_iterations = config.inner_max_iterations > 0 ? config.inner_max_iterations : 40 * g.n_cells() + 200;

  stats.status = SolveStatus::not_converged;
  while (true) {
    if (res <= tol) {
      stats.status = SolveStatus::converged;
      break;
    }
    if (stats.iterations >= config.max_iters) {
      stats.message = "max_iters reached";
      break;
    }
    ++stats.iterations;

    const kernels::GlHessianArgs args{g.n_cells(), u.planes(), stride, u.data().data(), f.data(),
                                      1.0 / dt,    coef,       inv_h2};
    const LinearOperator apply = [&](std::span<const double> in, std::span<double> y) {
      k.gl_hessian(args, in.data(), y.data());
    };
    for (std::size_t q = 0; q < len; ++q) {
      const std::size_t p = q % stride;
      const double d = 1.0 / dt - f[p] + 4.0 * inv_h2 + coef * u.data()[q] * u.data()[q];
      inv_diag[q] = (g.is_boundary(p) || !(d > 0.0)) ? 1.0 : 1.0 / d;
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    const CgResult step = conjugate_gradient(apply, rhs, delta, cg, inv_diag);
    stats.inner_iterations += step.iterations;

    bool accepted = false;
    if (!step.negative_curvature || step.iterations > 0) {
      auto td = trial.data();
      const auto ud = u.data();
      for (std::size_t q = 0; q < len; ++q) td[q] = ud[q] + delta[q];
      const double trial_energy = energy_gl(trial, epsilon).total;
      if (std::isfinite(trial_energy) && trial_energy <= energy + 1e-12 * std::abs(energy)) {
        std::swap(u, trial);
        energy = trial_energy;
        accepted = true;
      }
    }
    if (accepted) {
      if (!u.all_finite()) {
        stats.status = SolveStatus::aborted;
        stats.message = "non-finite field after step " + std::to_string(stats.iterations);
        break;
      }
      f = f_epsilon_field(u, epsilon);
      el_residual_planes(u, f, rhs);
      res = h2 * complex_max_norm(u, rhs);
      record(stats.energy_history, history_stride, history_counter, {stats.iterations, energy, res});
      dt = std::min(dt * config.growth, config.dt_max);
    } else {
      ++stats.rejected_steps;
      dt *= config.backtrack;
      if (dt < 1e-14 * dt0) {
        stats.status = SolveStatus::aborted;
        stats.message = "step size underflow";
        break;
      }
    }
  }

  if (stats.energy_history.empty() || stats.energy_history.back().iteration != stats.iterations) {
    stats.energy_history.push_back({stats.iterations, energy, res});
  }
  stats.final_residual = res;
  stats.residual_el = res / h2;
  stats.final_energy = energy_gl(u, epsilon);
  stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return out;
}

SingleSolveResult solve_single_gl(const Grid& grid, const ComplexField& init, double epsilon,
                                  const SolveConfig& config) {
  MultiField psi(grid, 1);
  psi.set_component(0, init);
  SolveResult r = solve_gl(psi, epsilon, config);
  return {r.field.component(0), std::move(r.stats)};
}

std::vector<StartSpec> default_starts(const Grid& grid, const BoundaryConfig& config, std::uint64_t seed,
                                      std::vector<std::string>* warnings,
                                      const std::vector<std::vector<std::array<double, 2>>>& vortex_points) {
  std::vector<StartSpec> starts;
  InitOptions opt;
  opt.vortex_points = vortex_points;
  opt.strategy = InitStrategy::harmonic;
  starts.push_back({"harmonic", init_field(grid, config, opt, warnings)});
  opt.strategy = InitStrategy::vortex_product;
  starts.push_back({"vortex_product", init_field(grid, config, opt, warnings)});
  opt.strategy = InitStrategy::random;
  opt.seed = seed;
  starts.push_back({"random:" + std::to_string(seed), init_field(grid, config, opt, warnings)});
  opt.seed = seed + 1;
  starts.push_back({"random:" + std::to_string(seed + 1), init_field(grid, config, opt, warnings)});
  return starts;
}

MultiStartResult solve_gl_multistart(const std::vector<StartSpec>& starts, double epsilon,
                                     const SolveConfig& config) {
  if (starts.empty()) throw std::invalid_argument("solve_gl_multistart: no starts");
  std::vector<SolveResult> runs;
  MultiStartResult out{starts.front().field, {}, 0, {}, false};
  bool any_converged = false;
  for (const StartSpec& s : starts) {
    runs.push_back(solve_gl(s.field, epsilon, config));
    out.starts.push_back({s.label, runs.back().stats});
    any_converged = any_converged || runs.back().stats.status == SolveStatus::converged;
  }
  std::size_t best = runs.size();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& st = runs[i].stats;
    if (any_converged && st.status != SolveStatus::converged) continue;
    if (st.status == SolveStatus::aborted && any_converged) continue;
    const double e = st.final_energy.total;
    if (!std::isfinite(e)) continue;
    if (first) {
      lo = hi = e;
      best = i;
      first = false;
      continue;
    }
    hi = std::max(hi, e);
    if (e < lo - 1e-10 * std::max(1.0, std::abs(lo))) {
      lo = e;
      best = i;
    }
    lo = std::min(lo, e);
  }
  if (best == runs.size()) best = 0;
  if (!first && any_converged) out.energies_disagree = (hi - lo) > 1e-6 * std::max(1.0, std::abs(lo));
  out.chosen = best;
  out.field = std::move(runs[best].field);
  out.stats = std::move(runs[best].stats);
  return out;
}

}  // namespace glvortex
