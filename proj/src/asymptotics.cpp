#include "glvortex/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "glvortex/error.hpp"
#include "glvortex/snapshot.hpp"

namespace glvortex {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool in_margin(const Grid& g, int i, int j, double margin) {
  return g.distance_to_boundary(i, j) >= margin - 1e-12;
}

}  // namespace

ScalarField f_star_field(const MultiField& u_star) {
  for (double s : u_star.modulus_sum()) {
    if (!(std::abs(s - u_star.n()) < 1e-8)) {
      throw std::invalid_argument("f_star_field: field is off the sphere constraint");
    }
  }
  ScalarField f(u_star.stride(), 0.0);
  for (int j = 0; j < u_star.n(); ++j) {
    const ScalarField gsq = centered_gradient_sq(u_star, j);
    for (std::size_t p = 0; p < f.size(); ++p) f[p] += gsq[p];
  }
  for (double& v : f) v /= u_star.n();
  return f;
}

double compare_f(const MultiField& psi_eps, double epsilon, const MultiField& u_star, double margin) {
  const Grid& g = psi_eps.grid();
  if (margin < 2.0 * g.h() - 1e-12) throw std::invalid_argument("compare_f: margin must be at least 2h");
  const ScalarField fe = f_epsilon_field(psi_eps, epsilon);
  const ScalarField fs = f_star_field(u_star);
  double num = 0.0, den = 0.0;
  std::size_t used = 0;
  for (int j = 1; j < g.n_cells(); ++j) {
    for (int i = 1; i < g.n_cells(); ++i) {
      if (!in_margin(g, i, j, margin)) continue;
      const std::size_t p = g.index(i, j);
      num += (fe[p] - fs[p]) * (fe[p] - fs[p]);
      den += fs[p] * fs[p];
      ++used;
    }
  }
  if (used == 0) throw std::invalid_argument("compare_f: no nodes at the requested margin");
  const double h2 = g.h() * g.h();
  return std::sqrt(num * h2) / std::max(std::sqrt(den * h2), 1e-12);
}

double pohozaev_boundary_integral(const MultiField& psi) {
  const Grid& g = psi.grid();
  const int n = g.n_cells();
  const double h = g.h();
  // Weights of the interior side nodes k = 1..n-1 after linear extension to the corners.
  std::vector<double> w(n + 1, 0.0);
  for (int k = 1; k < n; ++k) w[k] += h;
  w[1] += h;
  w[2] -= 0.5 * h;
  w[n - 1] += h;
  w[n - 2] -= 0.5 * h;

  const auto& order = g.boundary_order();
  double total = 0.0;
  for (int c = 0; c < psi.n(); ++c) {
    const ComplexField u = psi.component(c);
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (order[b].corner) continue;
      const int k = static_cast<int>(b % static_cast<std::size_t>(n));
      total += w[k] * std::norm(normal_derivative(g, u, b).value);
    }
  }
  return total;
}

double rotation_defect(const MultiField& psi, const std::vector<double>& gammas) {
  if (static_cast<int>(gammas.size()) != psi.n()) throw std::invalid_argument("rotation_defect: one gamma per component");
  double worst = 0.0;
  for (int j = 1; j < psi.n(); ++j) {
    const Complex rot = std::polar(1.0, gammas[j]);
    for (std::size_t p = 0; p < psi.stride(); ++p) {
      worst = std::max(worst, std::abs(psi.value(j, p) - rot * psi.value(0, p)));
    }
  }
  return worst;
}

double f_equation_residual(const MultiField& psi, double epsilon) {
  const Grid& g = psi.grid();
  const ScalarField f = f_epsilon_field(psi, epsilon);
  const ScalarField s = psi.modulus_sum();
  ScalarField grad(psi.stride(), 0.0);
  for (int j = 0; j < psi.n(); ++j) {
    const ScalarField e = edge_gradient_sq(psi, j);
    for (std::size_t p = 0; p < grad.size(); ++p) grad[p] += e[p];
  }
  const ScalarField lap = laplacian(g, f);
  const double eps2 = epsilon * epsilon;
  double worst = 0.0;
  for (int j = 2; j <= g.n_cells() - 2; ++j) {
    for (int i = 2; i <= g.n_cells() - 2; ++i) {
      const std::size_t p = g.index(i, j);
      worst = std::max(worst, std::abs(-eps2 * lap[p] + 2.0 * s[p] * f[p] - 2.0 * grad[p]));
    }
  }
  return worst;
}

namespace {

int quadrant(Complex z) {
  const bool re = z.real() >= 0.0, im = z.imag() >= 0.0;
  if (re && im) return 0;
  if (!re && im) return 1;
  if (!re) return 2;
  return 3;
}

// Quarter turns from a to b, in {-2, ..., 2}; opposite quadrants use the actual turn.
int quarter_turns(Complex a, Complex b) {
  int d = (quadrant(b) - quadrant(a) + 4) % 4;
  if (d == 3) return -1;
  if (d == 2) return (a.real() * b.imag() - a.imag() * b.real()) >= 0.0 ? 2 : -2;
  return d;
}

}  // namespace

std::vector<ZeroCell> detect_zeros(const ComplexField& component, const Grid& grid) {
  if (component.size() != grid.node_count()) throw std::invalid_argument("detect_zeros: size mismatch");
  std::vector<ZeroCell> zeros;
  const double h = grid.h();
  for (int j = 0; j < grid.n_cells(); ++j) {
    for (int i = 0; i < grid.n_cells(); ++i) {
      const Complex c[4] = {component[grid.index(i, j)], component[grid.index(i + 1, j)],
                            component[grid.index(i + 1, j + 1)], component[grid.index(i, j + 1)]};
      int turns = 0;
      for (int k = 0; k < 4; ++k) turns += quarter_turns(c[k], c[(k + 1) % 4]);
      const int charge = turns / 4;
      if (charge == 1 || charge == -1) zeros.push_back({i, j, charge, (i + 0.5) * h, (j + 0.5) * h});
    }
  }
  return zeros;
}

int total_charge(const std::vector<ZeroCell>& zeros) {
  int s = 0;
  for (const ZeroCell& z : zeros) s += z.charge;
  return s;
}

std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::converged: return "converged";
    case RecordStatus::unconverged: return "unconverged";
    case RecordStatus::under_resolved: return "under-resolved";
  }
  return "unknown";
}

namespace {

void fill_field_diagnostics(ContinuationRecord& rec, const MultiField& psi, const std::vector<int>& degrees,
                            const std::optional<std::vector<double>>& gammas) {
  const Grid& g = psi.grid();
  const double eps = rec.epsilon;
  rec.energy = energy_gl(psi, eps);
  rec.potential_total = rec.energy.potential_total;
  rec.potential_per_component = rec.energy.potential_per_component;
  rec.residual_el = residual_el(psi, eps);
  const ScalarField s = psi.modulus_sum();
  rec.sup_modulus_defect = 0.0;
  rec.max_modulus_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < s.size(); ++p) {
    rec.sup_modulus_defect = std::max(rec.sup_modulus_defect, std::abs(psi.n() - s[p]));
    if (!g.is_boundary(p)) rec.max_modulus_excess = std::max(rec.max_modulus_excess, s[p] - psi.n());
  }
  rec.pohozaev = pohozaev_boundary_integral(psi);
  rec.rotation_defect = gammas ? rotation_defect(psi, *gammas) : kNan;
  rec.f_equation_residual = f_equation_residual(psi, eps);
  double gmax = 0.0;
  rec.zero_count.clear();
  rec.zero_charge.clear();
  rec.boundary_winding_ok = true;
  for (int j = 0; j < psi.n(); ++j) {
    for (double v : centered_gradient_sq(psi, j)) gmax = std::max(gmax, v);
    const ComplexField u = psi.component(j);
    const auto zeros = detect_zeros(u, g);
    rec.zero_count.push_back(static_cast<int>(zeros.size()));
    rec.zero_charge.push_back(total_charge(zeros));
    std::vector<Complex> loop;
    for (const BoundaryNode& b : g.boundary_order()) loop.push_back(u[b.index]);
    try {
      rec.boundary_winding_ok = rec.boundary_winding_ok && winding_number(loop) == degrees[j];
    } catch (const Error&) {
      rec.boundary_winding_ok = false;
    }
  }
  rec.eps_grad_scale = eps * std::sqrt(gmax);
}

std::string snapshot_name(std::size_t k) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "field_%03zu.bin", k);
  return buf;
}

}  // namespace

ContinuationResult continuation(const Grid& grid, const BoundaryConfig& config,
                                const std::vector<double>& eps_schedule, const ContinuationConfig& cc) {
  config.validate();
  if (eps_schedule.empty()) throw std::invalid_argument("continuation: empty eps schedule");
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0) || !std::isfinite(eps_schedule[k])) {
      throw std::invalid_argument("continuation: eps values must be positive");
    }
    if (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1])) {
      throw std::invalid_argument("continuation: eps schedule must be strictly decreasing");
    }
  }
  if (cc.margin < 2.0 * grid.h() - 1e-12 || cc.margin >= 0.5) {
    throw std::invalid_argument("continuation: margin must lie in [2h, 0.5)");
  }
  std::vector<int> degrees;
  for (const BoundaryMap& m : config.maps) degrees.push_back(m.degree);
  const auto gammas = rotation_gammas(grid, config);

  ContinuationResult result{.u_star = MultiField(grid, config.n())};
  std::optional<MultiField> previous;
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
    const double eps = eps_schedule[k];
    SolveResult solved{MultiField(grid, config.n()), {}};
    if (!previous) {
      if (cc.multistart) {
        const auto starts = default_starts(grid, config, cc.solve.seed, &result.warnings, cc.vortex_points);
        MultiStartResult ms = solve_gl_multistart(starts, eps, cc.solve);
        result.first_starts = ms.starts;
        result.first_start_chosen = starts[ms.chosen].label;
        result.starts_disagree = ms.energies_disagree;
        solved = {std::move(ms.field), std::move(ms.stats)};
      } else {
        InitOptions opt;
        opt.strategy = cc.solve_init;
        opt.seed = cc.solve.seed;
        opt.vortex_points = cc.vortex_points;
        solved = solve_gl(init_field(grid, config, opt, &result.warnings), eps, cc.solve);
        result.first_start_chosen = to_string(cc.solve_init);
      }
    } else {
      solved = solve_gl(*previous, eps, cc.solve);
    }

    if (solved.stats.status == SolveStatus::aborted) {
      result.aborted = true;
      result.message = "eps=" + format_double(eps) + ": " + solved.stats.message;
      break;
    }
    ContinuationRecord rec;
    rec.epsilon = eps;
    rec.stats = solved.stats;
    if (solved.stats.status != SolveStatus::converged) {
      rec.status = RecordStatus::unconverged;
    } else if (eps < 2.0 * grid.h()) {
      rec.status = RecordStatus::under_resolved;
    }
    fill_field_diagnostics(rec, solved.field, degrees, gammas);
    if (cc.snapshot_dir) {
      const auto path = *cc.snapshot_dir / snapshot_name(k);
      write_snapshot(path, solved.field, eps);
      rec.snapshot = path.filename().string();
    }
    result.records.push_back(std::move(rec));
    result.fields.push_back(solved.field);
    previous = std::move(solved.field);
  }

  std::vector<MultiField> extra;
  if (!result.fields.empty()) {
    try {
      extra.push_back(project_sphere(result.fields.back()));
    } catch (const ProjectionUndefined& e) {
      result.warnings.push_back(std::string("last field not used as a u* start: ") + e.what());
    }
  }
  std::optional<BetaResult> beta;
  try {
    beta = solve_beta(grid, config, cc.beta, extra);
  } catch (const ProjectionUndefined& e) {
    result.warnings.push_back(std::string("u* unavailable: ") + e.what());
  }
  if (beta) {
    if (!beta->converged) result.warnings.push_back("u* solve did not reach its tolerance");
    result.has_u_star = true;
    result.beta = beta->beta;
    result.u_star_residual = beta->residual;
    result.u_star = std::move(beta->field);
    for (int j = 0; j < config.n(); ++j) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t p = 0; p < result.u_star.stride(); ++p) {
        const double m = std::abs(result.u_star.value(j, p));
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
      result.u_star_min_modulus.push_back(lo);
      result.u_star_max_modulus.push_back(hi);
    }
    if (cc.snapshot_dir) write_snapshot(*cc.snapshot_dir / "u_star.bin", result.u_star, kNan);
  } else {
    result.beta = kNan;
    result.u_star_residual = {kNan, kNan};
    result.u_star_min_modulus.assign(config.n(), kNan);
    result.u_star_max_modulus.assign(config.n(), kNan);
  }

  for (std::size_t k = 0; k < result.records.size(); ++k) {
    ContinuationRecord& rec = result.records[k];
    const MultiField& psi = result.fields[k];
    if (result.has_u_star) rec.f_rel_err = compare_f(psi, rec.epsilon, result.u_star, cc.margin);
    rec.interior_l2_err.clear();
    if (!result.has_u_star) {
      rec.f_rel_err = kNan;
      rec.interior_l2_err.assign(psi.n(), kNan);
    }
    for (int j = 0; j < psi.n() && result.has_u_star; ++j) {
      ScalarField d(psi.stride());
      for (std::size_t p = 0; p < d.size(); ++p) d[p] = std::norm(psi.value(j, p) - result.u_star.value(j, p));
      rec.interior_l2_err.push_back(std::sqrt(integrate(grid, d)));
    }
    if (k > 0) {
      const double prev = result.records[k - 1].energy.total, cur = rec.energy.total;
      const double scale = std::max(std::abs(prev), 1e-300);
      const double jump = std::abs(cur - prev) / scale;
      result.max_energy_jump = std::max(result.max_energy_jump, jump);
      if (jump > 0.05 || cur < prev - 1e-9 * scale) result.basin_jump = true;
    }
  }
  return result;
}

PotentialTrace component_potential_trace(const ContinuationResult& result, int j) {
  if (j < 0 || (!result.records.empty() && j >= static_cast<int>(result.records[0].potential_per_component.size()))) {
    throw std::invalid_argument("component_potential_trace: component out of range");
  }
  PotentialTrace trace;
  std::vector<std::pair<double, double>> usable;
  for (const ContinuationRecord& r : result.records) {
    trace.series.emplace_back(r.epsilon, r.potential_per_component[j]);
    if (r.status != RecordStatus::unconverged) usable.emplace_back(r.epsilon, r.potential_per_component[j]);
  }
  if (usable.size() < 3) {
    trace.verdict = "inconclusive";
    return trace;
  }
  bool diverging = true;
  for (std::size_t k = usable.size() - 2; k < usable.size(); ++k) {
    const auto [e0, v0] = usable[k - 1];
    const auto [e1, v1] = usable[k];
    double growth;
    if (v0 <= 0.0) {
      growth = v1 > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    } else {
      growth = std::pow(v1 / v0, std::log(2.0) / std::log(e0 / e1));
    }
    diverging = diverging && growth >= 1.3;
  }
  trace.verdict = diverging ? "diverging" : "bounded";
  return trace;
}

double log_slope(const std::vector<double>& eps, const std::vector<double>& energy) {
  if (eps.size() != energy.size() || eps.size() < 2) throw std::invalid_argument("log_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    mx += std::log(1.0 / eps[k]);
    my += energy[k];
  }
  mx /= eps.size();
  my /= eps.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double dx = std::log(1.0 / eps[k]) - mx;
    sxy += dx * (energy[k] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<BaselineSweep> baseline_sweep(const Grid& grid, const BoundaryConfig& config,
                                          const std::vector<double>& eps_schedule, const SolveConfig& solve) {
  config.validate();
  std::vector<BaselineSweep> out;
  for (int c = 0; c < config.n(); ++c) {
    BoundaryConfig single;
    single.maps = {config.maps[c]};
    InitOptions opt;
    opt.strategy = config.maps[c].degree > 0 ? InitStrategy::vortex_product : InitStrategy::harmonic;
    ComplexField u = init_field(grid, single, opt).component(0);
    BaselineSweep sweep;
    sweep.component = c;
    sweep.degree = config.maps[c].degree;
    for (double eps : eps_schedule) {
      SingleSolveResult r = solve_single_gl(grid, u, eps, solve);
      sweep.eps.push_back(eps);
      sweep.energy.push_back(r.stats.final_energy.total);
      sweep.stats.push_back(r.stats);
      u = std::move(r.field);
    }
    sweep.slope = sweep.eps.size() >= 2 ? log_slope(sweep.eps, sweep.energy) : kNan;
    out.push_back(std::move(sweep));
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_csv(std::ostream& out, const ContinuationResult& result, int n) {
  out << "epsilon,energy_total,dirichlet_total,potential_total";
  for (int j = 1; j <= n; ++j) out << ",potential_c" << j;
  out << ",residual_el,sup_modulus_defect,f_rel_err,pohozaev,rotation_defect";
  for (int j = 1; j <= n; ++j) out << ",zeros_c" << j;
  out << ",status\n";
  for (const ContinuationRecord& r : result.records) {
    out << format_double(r.epsilon) << ',' << format_double(r.energy.total) << ','
        << format_double(r.energy.dirichlet_total) << ',' << format_double(r.potential_total);
    for (int j = 0; j < n; ++j) out << ',' << format_double(r.potential_per_component[j]);
    out << ',' << format_double(r.residual_el) << ',' << format_double(r.sup_modulus_defect) << ','
        << format_double(r.f_rel_err) << ',' << format_double(r.pohozaev) << ',' << format_double(r.rotation_defect);
    for (int j = 0; j < n; ++j) out << ',' << r.zero_count[j];
    out << ',' << to_string(r.status) << '\n';
  }
}

}  // namespace glvortex
