#include "glvortex/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "glvortex/asymptotics.hpp"
#include "glvortex/config.hpp"
#include "glvortex/error.hpp"
#include "glvortex/kernels.hpp"
#include "glvortex/snapshot.hpp"

namespace glvortex {

namespace fs = std::filesystem;

namespace {

struct Run {
  RunConfig config;
  fs::path dir;
};

fs::path make_run_dir(const RunConfig& config, const CommandOptions& options, const std::string& command) {
  fs::path dir;
  if (options.out) {
    dir = *options.out;
  } else {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
    const fs::path base = fs::path(config.output_dir) / (command + "-" + stamp);
    dir = base;
    for (int k = 1; fs::exists(dir); ++k) dir = base.string() + "-" + std::to_string(k);
  }
  fs::create_directories(dir);
  return dir;
}

Run prepare(const CommandOptions& options, const std::string& command, std::ostream& err) {
  Run run;
  run.config = load_config(options.config_path);
  if (options.seed) run.config.solve.seed = *options.seed;
  if (options.trace) run.config.trace = true;
  for (const std::string& w : run.config.warnings) err << "warning: " << w << "\n";
  run.dir = make_run_dir(run.config, options, command);
  std::ofstream(run.dir / "config.resolved.json") << resolved_json(run.config);
  return run;
}

ContinuationConfig continuation_config(const RunConfig& rc, const fs::path& dir) {
  ContinuationConfig cc;
  cc.solve = rc.solve;
  cc.beta = rc.beta;
  cc.margin = rc.margin;
  cc.multistart = rc.init == "multistart";
  if (rc.init == "harmonic") cc.solve_init = InitStrategy::harmonic;
  if (rc.init == "random") cc.solve_init = InitStrategy::random;
  cc.vortex_points = rc.vortex_points;
  cc.snapshot_dir = dir;
  return cc;
}

void write_trace(const fs::path& path, const ContinuationResult& result) {
  std::ofstream t(path);
  t << "epsilon,iter,energy,residual\n";
  for (const ContinuationRecord& r : result.records) {
    for (const TracePoint& p : r.stats.energy_history) {
      t << format_double(r.epsilon) << ',' << p.iteration << ',' << format_double(p.energy) << ','
        << format_double(p.residual) << '\n';
    }
  }
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void write_summary(std::ostream& s, const ContinuationResult& r, const RunConfig& rc) {
  const int n = rc.boundary.n();
  s << "records: " << r.records.size() << "\n";
  if (r.aborted) s << "aborted: " << r.message << "\n";
  s << "first solve start: " << r.first_start_chosen << "\n";
  for (const StartOutcome& st : r.first_starts) {
    s << "  start " << st.label << ": energy " << format_double(st.stats.final_energy.total) << ", "
      << to_string(st.stats.status) << "\n";
  }
  s << "multistart energies disagree: " << yes_no(r.starts_disagree) << "\n";
  s << "basin jump flagged: " << yes_no(r.basin_jump) << " (max relative energy jump "
    << format_double(r.max_energy_jump) << ")\n";
  for (const ContinuationRecord& rec : r.records) {
    s << "eps " << format_double(rec.epsilon) << ": " << to_string(rec.status) << ", energy "
      << format_double(rec.energy.total) << ", iterations " << rec.stats.iterations << ", residual_el "
      << format_double(rec.residual_el) << ", max(sum|u|^2 - n) " << format_double(rec.max_modulus_excess)
      << ", eps*max|grad u| " << format_double(rec.eps_grad_scale) << ", charges";
    for (int j = 0; j < n; ++j) s << ' ' << rec.zero_charge[j];
    s << ", boundary winding " << (rec.boundary_winding_ok ? "ok" : "MISMATCH") << "\n";
  }
  s << "\nverdicts\n";
  std::vector<double> eps, pot, sup, ferr, poh, energy;
  for (const ContinuationRecord& rec : r.records) {
    eps.push_back(rec.epsilon);
    pot.push_back(rec.potential_total);
    sup.push_back(rec.sup_modulus_defect);
    ferr.push_back(rec.f_rel_err);
    poh.push_back(rec.pohozaev);
    energy.push_back(rec.energy.total);
  }
  if (!r.records.empty()) {
    const double ratio = pot.front() > 0.0 ? pot.back() / pot.front() : 0.0;
    s << "potential decay: strictly decreasing " << yes_no(strictly_decreasing(pot)) << ", last/first "
      << format_double(ratio) << "\n";
    s << "sup modulus defect: strictly decreasing " << yes_no(strictly_decreasing(sup)) << ", final "
      << format_double(sup.back()) << "\n";
    s << "f_rel_err: strictly decreasing " << yes_no(strictly_decreasing(ferr)) << ", final "
      << format_double(ferr.back()) << "\n";
    double lo = poh.front(), hi = poh.front();
    for (double v : poh) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    s << "pohozaev max/min: " << format_double(lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : INFINITY)) << "\n";
    for (int j = 0; j < n; ++j) {
      s << "component " << j + 1 << " potential trace: " << component_potential_trace(r, j).verdict << "\n";
    }
    if (eps.size() >= 2) s << "energy slope vs log(1/eps): " << format_double(log_slope(eps, energy)) << "\n";
  }
  if (!r.has_u_star) {
    s << "u*: unavailable\n";
    for (const std::string& w : r.warnings) s << "warning: " << w << "\n";
    return;
  }
  s << "beta (u* energy): " << format_double(r.beta) << ", residual " << format_double(r.u_star_residual.residual)
    << ", constraint deviation " << format_double(r.u_star_residual.deviation) << "\n";
  for (int j = 0; j < n; ++j) {
    s << "u* component " << j + 1 << " modulus range [" << format_double(r.u_star_min_modulus[j]) << ", "
      << format_double(r.u_star_max_modulus[j]) << "]\n";
  }
  for (const std::string& w : r.warnings) s << "warning: " << w << "\n";
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_not_converged;
  }
}

int run_sweep(const Run& run, const std::vector<double>& schedule, std::ostream& out) {
  const RunConfig& rc = run.config;
  const Grid grid(rc.n_cells);
  ContinuationConfig cc = continuation_config(rc, run.dir);
  const ContinuationResult result = continuation(grid, rc.boundary, schedule, cc);
  {
    std::ofstream csv(run.dir / "diagnostics.csv");
    write_diagnostics_csv(csv, result, rc.boundary.n());
  }
  if (rc.trace) write_trace(run.dir / "trace.csv", result);
  std::ostringstream summary;
  write_summary(summary, result, rc);
  std::ofstream(run.dir / "summary.txt") << summary.str();
  out << "run directory: " << run.dir.string() << "\n" << summary.str();
  bool ok = !result.aborted && result.records.size() == schedule.size();
  for (const ContinuationRecord& r : result.records) ok = ok && r.status != RecordStatus::unconverged;
  return ok ? exit_ok : exit_not_converged;
}

}  // namespace

int cmd_solve(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig rc = load_config(options.config_path);
    double eps;
    if (options.epsilon) {
      eps = *options.epsilon;
      if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("--epsilon", "must be positive");
    } else if (!rc.eps_schedule.empty()) {
      eps = rc.eps_schedule.front();
    } else {
      throw ConfigError("sweep.eps_schedule", "needed when --epsilon is not given");
    }
    Run run = prepare(options, "solve", err);
    return run_sweep(run, {eps}, out);
  });
}

int cmd_continue(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Run run = prepare(options, "continue", err);
    if (run.config.eps_schedule.empty()) throw ConfigError("sweep.eps_schedule", "missing required key");
    return run_sweep(run, run.config.eps_schedule, out);
  });
}

int cmd_alpha_beta(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Run run = prepare(options, "alpha-beta", err);
    const RunConfig& rc = run.config;
    const Grid grid(rc.n_cells);
    const AlphaBetaReport r = alpha_beta(grid, rc.boundary, rc.beta);
    {
      std::ofstream csv(run.dir / "alpha_beta.csv");
      csv << "alpha,beta,gap,beta_residual,constraint_deviation,gradient_mismatch,beta_converged\n";
      csv << (r.alpha ? format_double(*r.alpha) : "undefined") << ',' << format_double(r.beta) << ','
          << (r.gap ? format_double(*r.gap) : "undefined") << ',' << format_double(r.beta_residual.residual) << ','
          << format_double(r.beta_residual.deviation) << ',' << format_double(r.gradient_mismatch) << ','
          << (r.beta_converged ? "yes" : "no") << '\n';
    }
    write_snapshot(run.dir / "beta_minimizer.bin", r.minimizer_beta, NAN);
    if (r.minimizer_alpha) write_snapshot(run.dir / "alpha_minimizer.bin", *r.minimizer_alpha, NAN);
    std::ostringstream s;
    s << "alpha: " << r.alpha_text() << "\n";
    s << "beta: " << format_double(r.beta) << (r.beta_converged ? "" : " (not converged)") << "\n";
    s << "gap alpha - beta: " << (r.gap ? format_double(*r.gap) : "undefined") << "\n";
    s << "beta residual: " << format_double(r.beta_residual.residual) << ", constraint deviation "
      << format_double(r.beta_residual.deviation) << "\n";
    s << "gradient modulus mismatch (relative): " << format_double(r.gradient_mismatch) << "\n";
    s << "beta multistart energies disagree: " << yes_no(r.starts_disagree) << "\n";
    std::ofstream(run.dir / "summary.txt") << s.str();
    out << "run directory: " << run.dir.string() << "\n" << s.str();
    return r.beta_converged ? exit_ok : exit_not_converged;
  });
}

int cmd_baseline(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Run run = prepare(options, "baseline", err);
    const RunConfig& rc = run.config;
    if (rc.eps_schedule.empty()) throw ConfigError("sweep.eps_schedule", "missing required key");
    const Grid grid(rc.n_cells);
    const auto sweeps = baseline_sweep(grid, rc.boundary, rc.eps_schedule, rc.solve);
    bool ok = true;
    std::ostringstream s;
    {
      std::ofstream csv(run.dir / "baseline.csv");
      csv << "component,degree,epsilon,energy,iterations,status\n";
      for (const BaselineSweep& sw : sweeps) {
        for (std::size_t k = 0; k < sw.eps.size(); ++k) {
          csv << sw.component + 1 << ',' << sw.degree << ',' << format_double(sw.eps[k]) << ','
              << format_double(sw.energy[k]) << ',' << sw.stats[k].iterations << ','
              << to_string(sw.stats[k].status) << '\n';
          ok = ok && sw.stats[k].status == SolveStatus::converged;
        }
        s << "component " << sw.component + 1 << " (degree " << sw.degree << "): slope of E vs log(1/eps) "
          << format_double(sw.slope) << " = " << format_double(sw.slope / std::numbers::pi) << " pi\n";
      }
    }
    std::ofstream(run.dir / "summary.txt") << s.str();
    out << "run directory: " << run.dir.string() << "\n" << s.str();
    return ok ? exit_ok : exit_not_converged;
  });
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double gradient_fd_error(const MultiField& psi, double eps) {
  const MultiField grad = grad_energy_gl(psi, eps);
  const Grid& g = psi.grid();
  MultiField work(psi);
  const double step = 1e-5;
  double worst = 0.0, scale = 0.0;
  for (int c = 0; c < psi.planes(); ++c) {
    for (std::size_t p = 0; p < psi.stride(); ++p) {
      if (g.is_boundary(p)) continue;
      const double saved = work.plane(c)[p];
      work.plane(c)[p] = saved + step;
      const double ep = energy_gl(work, eps).total;
      work.plane(c)[p] = saved - step;
      const double em = energy_gl(work, eps).total;
      work.plane(c)[p] = saved;
      const double fd = (ep - em) / (2.0 * step);
      worst = std::max(worst, std::abs(fd - grad.plane(c)[p]));
      scale = std::max(scale, std::abs(grad.plane(c)[p]));
    }
  }
  return worst / scale;
}

}  // namespace

std::vector<CheckResult> run_checks() {
  std::vector<CheckResult> results;
  auto add = [&](std::string name, bool ok, std::string observed, std::string expected) {
    results.push_back({std::move(name), ok, std::move(observed), std::move(expected)});
  };

  BoundaryConfig d10;
  d10.maps = {BoundaryMap{1, {{1, 0.2, 0.3}}}, BoundaryMap{0, {{2, 0.4, 0.0}}}};
  {
    const Grid g(16);
    InitOptions opt;
    opt.strategy = InitStrategy::random;
    opt.seed = 7;
    const MultiField psi = init_field(g, d10, opt);
    const double e = gradient_fd_error(psi, 0.3);
    add("energy gradient vs central differences (seed 7)", e < 1e-6, fmt(e), "< 1e-6");
  }
  {
    const Grid g(16);
    InitOptions opt;
    opt.strategy = InitStrategy::random;
    opt.seed = 11;
    const MultiField v = init_field(g, d10, opt);
    const MultiField w = project_sphere(v);
    const MultiField ww = project_sphere(w);
    double dev = 0.0, idem = 0.0;
    for (double s : w.modulus_sum()) dev = std::max(dev, std::abs(s - 2.0));
    for (std::size_t q = 0; q < w.data().size(); ++q) idem = std::max(idem, std::abs(w.data()[q] - ww.data()[q]));
    add("projection onto sum |u_j|^2 = n", dev <= 1e-12, fmt(dev), "<= 1e-12");
    add("projection idempotence", idem <= 1e-14, fmt(idem), "<= 1e-14");
  }
  for (int n_cells : {16, 64}) {
    const Grid g(n_cells);
    bool ok = true;
    std::string observed;
    for (int d = 0; d <= 3; ++d) {
      const BoundaryMap m{d, {{1, 0.5, 0.1}, {3, 0.2, 0.0}}};
      const int w = winding_number(sample_boundary(g, m));
      ok = ok && w == d;
      observed += (observed.empty() ? "" : " ") + std::to_string(w);
    }
    add("winding numbers, n_cells=" + std::to_string(n_cells), ok, observed, "0 1 2 3");
  }
  {
    const Grid g(32);
    const double l = lambda1(g), c = lambda1_closed_form(g);
    const double rel = std::abs(l - c) / c;
    add("lambda1 vs 2(2 - 2cos(pi h))/h^2", rel < 1e-9, fmt(rel), "< 1e-9");
  }
  {
    const auto* fast = kernels::avx2_table();
    if (!fast) {
      add("vector kernels vs scalar reference", true, "vector kernels unavailable", "skipped");
    } else {
      const auto& ref = kernels::scalar_table();
      const int n = 37;
      const std::size_t len = static_cast<std::size_t>(n + 1) * (n + 1);
      std::mt19937_64 rng(3);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      std::vector<double> a(len), b(len), u(4 * len), f(len), in(4 * len), o1(4 * len, 0.0), o2(4 * len, 0.0);
      for (auto* v : {&a, &b, &u, &f, &in}) {
        for (double& x : *v) x = dist(rng);
      }
      double worst = 0.0;
      auto diff = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double m = 0.0;
        for (std::size_t q = 0; q < x.size(); ++q) m = std::max(m, std::abs(x[q] - y[q]) / (1.0 + std::abs(x[q])));
        return m;
      };
      ref.laplacian(a.data(), o1.data(), n, 7.0);
      fast->laplacian(a.data(), o2.data(), n, 7.0);
      worst = std::max(worst, diff(o1, o2));
      ref.helmholtz(a.data(), o1.data(), n, 2.5, 7.0);
      fast->helmholtz(a.data(), o2.data(), n, 2.5, 7.0);
      worst = std::max(worst, diff(o1, o2));
      const kernels::GlHessianArgs args{n, 4, len, u.data(), f.data(), 3.0, 5.0, 7.0};
      ref.gl_hessian(args, in.data(), o1.data());
      fast->gl_hessian(args, in.data(), o2.data());
      worst = std::max(worst, diff(o1, o2));
      const double d1 = ref.dot(a.data(), b.data(), len), d2 = fast->dot(a.data(), b.data(), len);
      worst = std::max(worst, std::abs(d1 - d2) / (1.0 + std::abs(d1)));
      add("vector kernels vs scalar reference", worst < 1e-12, fmt(worst), "< 1e-12");
    }
  }
  {
    const Grid g(8);
    InitOptions opt;
    opt.strategy = InitStrategy::random;
    opt.seed = 5;
    const MultiField psi = init_field(g, d10, opt);
    std::stringstream buf;
    write_snapshot(buf, psi, 0.125);
    const Snapshot back = read_snapshot(buf);
    const bool same = back.epsilon == 0.125 && back.field.n() == psi.n() &&
                      std::equal(psi.data().begin(), psi.data().end(), back.field.data().begin());
    add("snapshot round trip", same, same ? "identical" : "differs", "identical");
  }
  return results;
}

int cmd_check(std::ostream& out) {
  bool all = true;
  for (const CheckResult& r : run_checks()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": observed " << r.observed << ", expected " << r.expected
        << "\n";
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "some checks failed") << "\n";
  return all ? exit_ok : 1;
}

}  // namespace glvortex
