#include "glvortex/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "glvortex/error.hpp"
#include "glvortex/kernels.hpp"
#include "glvortex/linear_solver.hpp"

namespace glvortex {

MultiField project_sphere(const MultiField& psi) {
  const Grid& g = psi.grid();
  MultiField out(psi);
  const ScalarField s = psi.modulus_sum();
  const double root_n = std::sqrt(static_cast<double>(psi.n()));
  for (std::size_t p = 0; p < s.size(); ++p) {
    if (!(s[p] > 1e-10)) throw ProjectionUndefined(g.i_of(p), g.j_of(p), s[p]);
    const double scale = root_n / std::sqrt(s[p]);
    for (int c = 0; c < psi.planes(); ++c) out.plane(c)[p] = scale * psi.plane(c)[p];
  }
  return out;
}

namespace {

// r_j = lap u_j + m u_j on interior nodes, m = (1/n) sum_k |grad u_k|^2 (edge form).
std::vector<double> harmonic_residual_planes(const MultiField& psi) {
  const Grid& g = psi.grid();
  const auto& k = kernels::active();
  const std::size_t stride = psi.stride();
  ScalarField m(stride, 0.0);
  for (int j = 0; j < psi.n(); ++j) {
    const ScalarField e = edge_gradient_sq(psi, j);
    for (std::size_t p = 0; p < stride; ++p) m[p] += e[p];
  }
  for (double& v : m) v /= psi.n();
  std::vector<double> r(psi.data().size(), 0.0);
  for (int c = 0; c < psi.planes(); ++c) {
    const double* x = psi.data().data() + c * stride;
    double* out = r.data() + c * stride;
    k.laplacian(x, out, g.n_cells(), 1.0 / (g.h() * g.h()));
    for (int jj = 1; jj < g.n_cells(); ++jj) {
      for (int ii = 1; ii < g.n_cells(); ++ii) {
        const std::size_t p = g.index(ii, jj);
        out[p] += m[p] * x[p];
      }
    }
  }
  return r;
}

double max_modulus(const MultiField& psi, const std::vector<double>& planes) {
  const std::size_t stride = psi.stride();
  double worst = 0.0;
  for (int j = 0; j < psi.n(); ++j) {
    for (std::size_t p = 0; p < stride; ++p) {
      worst = std::max(worst, std::hypot(planes[2 * j * stride + p], planes[(2 * j + 1) * stride + p]));
    }
  }
  return worst;
}

double constraint_deviation(const MultiField& psi) {
  double worst = 0.0;
  for (double s : psi.modulus_sum()) worst = std::max(worst, std::abs(s - psi.n()));
  return worst;
}

}  // namespace

HarmonicResidual residual_harmonic(const MultiField& psi) {
  return {max_modulus(psi, harmonic_residual_planes(psi)), constraint_deviation(psi)};
}

BetaResult solve_beta_from(const MultiField& start, const BoundarySamples& samples, const BetaConfig& config) {
  const Grid& g = start.grid();
  const auto& k = kernels::active();
  const std::size_t stride = start.stride();
  const double inv_h2 = 1.0 / (g.h() * g.h());

  BetaResult out{start, 0.0, {}, 0, false, 0, {}, false};
  MultiField& u = out.field;
  double energy = energy_dirichlet(u);
  std::vector<double> r = harmonic_residual_planes(u);
  double res = max_modulus(u, r);
  double tau = config.tau0 > 0.0 ? config.tau0 : 10.0 * g.h();
  const double tau_floor = 1e-14 * tau;

  std::vector<double> delta(u.data().size());
  CgOptions cg;
  cg.relative_tolerance = 1e-6;
  cg.max_iterations = 40 * g.n_cells() + 200;

  while (res > config.tol && out.iterations < config.max_iters) {
    ++out.iterations;
    const double shift = 1.0 / tau;
    const LinearOperator apply = [&](std::span<const double> in, std::span<double> y) {
      k.helmholtz(in.data(), y.data(), g.n_cells(), shift, inv_h2);
    };
    std::fill(delta.begin(), delta.end(), 0.0);
    for (int c = 0; c < u.planes(); ++c) {
      conjugate_gradient(apply, std::span<const double>(r.data() + c * stride, stride),
                         std::span<double>(delta.data() + c * stride, stride), cg);
    }
    bool accepted = false;
    try {
      MultiField trial(u);
      auto td = trial.data();
      for (std::size_t q = 0; q < td.size(); ++q) td[q] += delta[q];
      trial = project_sphere(trial);
      pin_boundary(trial, samples);
      const double e = energy_dirichlet(trial);
      if (std::isfinite(e) && e <= energy + 1e-12 * std::abs(energy)) {
        u = std::move(trial);
        energy = e;
        accepted = true;
      }
    } catch (const ProjectionUndefined&) {
      accepted = false;
    }
    if (accepted) {
      r = harmonic_residual_planes(u);
      res = max_modulus(u, r);
      tau = std::min(tau * config.growth, config.tau_max);
    } else {
      tau *= config.backtrack;
      if (tau < tau_floor) throw SolverError("solve_beta: step size underflow", res);
    }
  }
  out.beta = energy;
  out.residual = {res, constraint_deviation(u)};
  out.converged = res <= config.tol;
  return out;
}

BetaResult solve_beta(const Grid& grid, const BoundaryConfig& config, const BetaConfig& beta_config,
                      const std::vector<MultiField>& extra_starts) {
  config.validate();
  const BoundarySamples samples = sample_all(grid, config);
  std::vector<MultiField> starts;
  InitOptions harmonic;
  harmonic.strategy = InitStrategy::harmonic;
  starts.push_back(init_field(grid, config, harmonic));
  for (const MultiField& s : extra_starts) {
    if (s.n() != config.n() || s.grid().n_cells() != grid.n_cells()) {
      throw std::invalid_argument("solve_beta: start does not match the problem");
    }
    starts.push_back(s);
  }

  std::vector<BetaResult> runs;
  std::vector<double> energies;
  for (MultiField& s : starts) {
    MultiField projected = project_sphere(s);
    pin_boundary(projected, samples);
    runs.push_back(solve_beta_from(projected, samples, beta_config));
    energies.push_back(runs.back().beta);
  }
  bool any_converged = false;
  for (const auto& r : runs) any_converged = any_converged || r.converged;
  std::size_t best = runs.size();
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (any_converged && !runs[i].converged) continue;
    const double e = runs[i].beta;
    if (best == runs.size()) {
      best = i;
      lo = hi = e;
      continue;
    }
    hi = std::max(hi, e);
    if (e < lo - 1e-10 * std::max(1.0, std::abs(lo))) best = i;
    lo = std::min(lo, e);
  }
  BetaResult out = std::move(runs[best]);
  out.chosen_start = best;
  out.start_energies = energies;
  out.starts_disagree = (hi - lo) > 1e-6 * std::max(1.0, std::abs(lo));
  return out;
}

namespace {

// Minimizes sum_edges (2 - 2 cos(phi_a - phi_b)) over interior phases by damped Newton.
int minimize_xy(const Grid& g, std::vector<double>& phi) {
  const int n = g.n_cells();
  const int side = g.side();
  const std::size_t count = g.node_count();
  auto energy = [&](const std::vector<double>& f) {
    double e = 0.0;
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        const std::size_t p = g.index(i, j);
        if (i < n) e += ((j == 0 || j == n) ? 0.5 : 1.0) * (2.0 - 2.0 * std::cos(f[p] - f[p + 1]));
        if (j < n) e += ((i == 0 || i == n) ? 0.5 : 1.0) * (2.0 - 2.0 * std::cos(f[p] - f[p + side]));
      }
    }
    return e;
  };
  const std::ptrdiff_t offsets[4] = {1, -1, side, -side};
  std::vector<double> grad(count), weights(4 * count), inv_diag(count), step(count), trial(count);
  double e = energy(phi);
  int it = 0;
  for (; it < 100; ++it) {
    double gmax = 0.0;
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const std::size_t p = g.index(i, j);
        double gp = 0.0, d = 0.0;
        for (int s = 0; s < 4; ++s) {
          const double diff = phi[p] - phi[p + offsets[s]];
          gp += 2.0 * std::sin(diff);
          const double w = std::max(2.0 * std::cos(diff), 1e-3);
          weights[4 * p + s] = w;
          d += w;
        }
        grad[p] = -gp;
        inv_diag[p] = 1.0 / d;
        gmax = std::max(gmax, std::abs(gp));
      }
    }
    if (gmax < 1e-15) break;
    const LinearOperator apply = [&](std::span<const double> x, std::span<double> y) {
      std::fill(y.begin(), y.end(), 0.0);
      for (int j = 1; j < n; ++j) {
        for (int i = 1; i < n; ++i) {
          const std::size_t p = g.index(i, j);
          double acc = 0.0;
          for (int s = 0; s < 4; ++s) {
            const std::size_t q = p + offsets[s];
            acc += weights[4 * p + s] * (x[p] - (g.is_boundary(q) ? 0.0 : x[q]));
          }
          y[p] = acc;
        }
      }
    };
    std::fill(step.begin(), step.end(), 0.0);
    CgOptions cg;
    cg.relative_tolerance = 1e-12;
    cg.max_iterations = 50 * n + 1000;
    conjugate_gradient(apply, grad, step, cg, inv_diag);
    double smax = 0.0;
    for (double s : step) smax = std::max(smax, std::abs(s));
    double a = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k, a *= 0.5) {
      for (std::size_t p = 0; p < count; ++p) trial[p] = phi[p] + a * step[p];
      const double et = energy(trial);
      if (et <= e) {
        phi.swap(trial);
        e = et;
        moved = true;
        break;
      }
    }
    if (!moved || smax < 1e-13) {
      ++it;
      break;
    }
  }
  return it;
}

}  // namespace

AlphaResult solve_alpha(const Grid& grid, const BoundaryConfig& config) {
  config.validate();
  for (const BoundaryMap& m : config.maps) {
    if (m.degree != 0) throw AlphaUndefined();
  }
  const BoundarySamples samples = sample_all(grid, config);
  const auto& order = grid.boundary_order();
  AlphaResult out{MultiField(grid, config.n()), 0.0, {}, 0};
  for (int j = 0; j < config.n(); ++j) {
    if (winding_number(samples[j]) != 0) throw AlphaUndefined();
    const std::vector<double> lift = lift_phase(samples[j]);
    std::vector<double> phi = harmonic_extension(grid, lift);
    out.newton_iterations += minimize_xy(grid, phi);
    for (std::size_t p = 0; p < grid.node_count(); ++p) out.field.set(j, p, std::polar(1.0, phi[p]));
    for (std::size_t b = 0; b < order.size(); ++b) out.field.set(j, order[b].index, samples[j][b]);
    out.phases.push_back(std::move(phi));
  }
  out.alpha = energy_dirichlet(out.field);
  return out;
}

std::string AlphaBetaReport::alpha_text() const {
  if (!alpha) return "undefined (nonzero degree)";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *alpha);
  return buf;
}

AlphaBetaReport alpha_beta(const Grid& grid, const BoundaryConfig& config, const BetaConfig& beta_config) {
  AlphaBetaReport report{std::nullopt, 0.0, std::nullopt, MultiField(grid, config.n()), std::nullopt, {}, false,
                         false, 0.0};
  std::vector<MultiField> extra;
  try {
    AlphaResult a = solve_alpha(grid, config);
    report.alpha = a.alpha;
    extra.push_back(a.field);
    report.minimizer_alpha = std::move(a.field);
  } catch (const AlphaUndefined&) {
  } catch (const NoGlobalLift&) {
  }
  BetaResult b = solve_beta(grid, config, beta_config, extra);
  report.beta = b.beta;
  report.beta_residual = b.residual;
  report.beta_converged = b.converged;
  report.starts_disagree = b.starts_disagree;
  if (report.alpha) report.gap = *report.alpha - report.beta;

  const MultiField& u = b.field;
  std::vector<ScalarField> mods;
  double mean = 0.0;
  for (int j = 0; j < u.n(); ++j) {
    ScalarField m = centered_gradient_sq(u, j);
    for (double& v : m) v = std::sqrt(v);
    mods.push_back(std::move(m));
  }
  double worst = 0.0;
  for (int jj = 1; jj < grid.n_cells(); ++jj) {
    for (int ii = 1; ii < grid.n_cells(); ++ii) {
      const std::size_t p = grid.index(ii, jj);
      for (int j = 0; j < u.n(); ++j) {
        mean += mods[j][p];
        for (int k = j + 1; k < u.n(); ++k) worst = std::max(worst, std::abs(mods[j][p] - mods[k][p]));
      }
    }
  }
  mean /= static_cast<double>(grid.interior_count() * u.n());
  report.gradient_mismatch = mean > 0.0 ? worst / mean : 0.0;
  report.minimizer_beta = std::move(b.field);
  return report;
}

double lambda1_closed_form(const Grid& grid) {
  const double h = grid.h();
  return 2.0 * (2.0 - 2.0 * std::cos(std::numbers::pi * h)) / (h * h);
}

double lambda1(const Grid& grid, double tolerance, int max_iterations) {
  const auto& k = kernels::active();
  const int n = grid.n_cells();
  const std::size_t count = grid.node_count();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const LinearOperator apply = [&](std::span<const double> x, std::span<double> y) {
    k.helmholtz(x.data(), y.data(), n, 0.0, inv_h2);
  };
  std::vector<double> x(count, 0.0), y(count), ax(count);
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) x[grid.index(i, j)] = 1.0;
  }
  auto normalize = [&](std::vector<double>& v) {
    const double s = std::sqrt(k.dot(v.data(), v.data(), count));
    for (double& e : v) e /= s;
  };
  normalize(x);
  CgOptions cg;
  cg.relative_tolerance = 1e-14;
  cg.max_iterations = 50 * n + 1000;
  double lambda = 0.0, residual = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    std::copy(x.begin(), x.end(), y.begin());
    conjugate_gradient(apply, x, y, cg);
    normalize(y);
    x.swap(y);
    apply(x, ax);
    lambda = k.dot(x.data(), ax.data(), count);
    double r2 = 0.0;
    for (std::size_t p = 0; p < count; ++p) r2 += (ax[p] - lambda * x[p]) * (ax[p] - lambda * x[p]);
    residual = std::sqrt(r2) / lambda;
    // The eigenvalue error is quadratic in the eigenvector residual.
    if (residual * residual < tolerance * 1e-2) return lambda;
  }
  throw SolverError("lambda1: inverse iteration did not converge, residual " + std::to_string(residual), residual);
}

double rotation_threshold(int n, const Grid& grid) {
  if (n < 1) throw std::invalid_argument("rotation_threshold: n must be at least 1");
  return std::sqrt(n / lambda1(grid));
}

}  // namespace glvortex
