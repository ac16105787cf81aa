#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "glvortex/asymptotics.hpp"
#include "glvortex/snapshot.hpp"

using namespace glvortex;

namespace {

constexpr double kPi = std::numbers::pi;

BoundaryConfig config_of(std::vector<BoundaryMap> maps) {
  BoundaryConfig c;
  c.maps = std::move(maps);
  return c;
}

MultiField constant_field(const Grid& g, int n) {
  MultiField u(g, n);
  for (int j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < g.node_count(); ++p) u.set(j, p, 1.0);
  }
  return u;
}

ContinuationResult synthetic(const std::vector<double>& eps, const std::vector<double>& values) {
  ContinuationResult r{.u_star = MultiField(Grid(4), 1)};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    ContinuationRecord rec;
    rec.epsilon = eps[k];
    rec.potential_per_component = {values[k]};
    r.records.push_back(rec);
  }
  return r;
}

}  // namespace

TEST_CASE("f_star of a constant field vanishes") {
  const Grid g(8);
  for (double v : f_star_field(constant_field(g, 2))) CHECK(v == 0.0);
  MultiField off(g, 1);
  CHECK_THROWS_AS(f_star_field(off), std::invalid_argument);
}

TEST_CASE("f_star of a rotation family equals |grad phi|^2") {
  std::vector<double> err;
  for (int n : {32, 64}) {
    const Grid g(n);
    const AlphaResult a = solve_alpha(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, 0.7}}));
    const ScalarField fs = f_star_field(a.field);
    double worst = 0.0;
    const int side = g.side();
    for (int j = 1; j < n; ++j) {
      for (int i = 1; i < n; ++i) {
        const std::size_t p = g.index(i, j);
        const auto& phi = a.phases[0];
        const double dx = (phi[p + 1] - phi[p - 1]) / (2 * g.h());
        const double dy = (phi[p + side] - phi[p - side]) / (2 * g.h());
        worst = std::max(worst, std::abs(fs[p] - (dx * dx + dy * dy)));
      }
    }
    err.push_back(worst);
  }
  // e^{i phi} differences lose only O(h^2) against the phase differences
  CHECK(err[0] < 0.05);
  CHECK(err[1] < err[0] / 3.0);
}

TEST_CASE("compare_f edge cases") {
  const Grid g(32);
  const MultiField one = constant_field(g, 2);
  CHECK(compare_f(one, 0.1, one, 0.1) == 0.0);

  const AlphaResult a = solve_alpha(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, 0.7}}));
  CHECK(compare_f(a.field, 0.1, a.field, 0.1) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(compare_f(one, 0.1, one, g.h()), std::invalid_argument);
  CHECK_THROWS_AS(compare_f(one, 0.1, one, 0.6), std::invalid_argument);
  CHECK_NOTHROW(compare_f(one, 0.1, one, 2 * g.h()));
}

TEST_CASE("Pohozaev boundary integral") {
  const Grid g(16);
  CHECK(pohozaev_boundary_integral(constant_field(g, 2)) == 0.0);
  for (int n : {4, 8, 32}) {
    const Grid gn(n);
    MultiField u(gn, 1);
    for (std::size_t p = 0; p < gn.node_count(); ++p) u.set(0, p, {gn.x(gn.i_of(p)), gn.y(gn.j_of(p))});
    CHECK(pohozaev_boundary_integral(u) == doctest::Approx(4.0).epsilon(1e-12));
  }
  // u = x^2: |du/dnu|^2 is 4 on the right side, 0 on the left and x^2 ... zero on top and bottom
  const Grid g32(32);
  MultiField q(g32, 1);
  for (std::size_t p = 0; p < g32.node_count(); ++p) q.set(0, p, g32.x(g32.i_of(p)) * g32.x(g32.i_of(p)));
  CHECK(pohozaev_boundary_integral(q) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("rotation defect") {
  const Grid g(8);
  MultiField u(g, 2);
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    u.set(0, p, std::polar(0.5 + 0.01 * p, 0.1 * p));
    u.set(1, p, Complex(0, 1) * u.value(0, p));
  }
  CHECK(rotation_defect(u, {0.0, kPi / 2}) < 1e-15);
  CHECK(rotation_defect(u, {0.0, 0.0}) > 0.5);
  CHECK_THROWS_AS(rotation_defect(u, {0.0}), std::invalid_argument);
}

TEST_CASE("f-equation residual") {
  const Grid g(32);
  CHECK(f_equation_residual(constant_field(g, 2), 0.1) == 0.0);
  const BoundaryConfig c = config_of({{1, {}}, {0, {}}});
  InitOptions opt;
  opt.strategy = InitStrategy::vortex_product;
  const SolveResult r = solve_gl(init_field(g, c, opt), 0.2, {});
  REQUIRE(r.stats.status == SolveStatus::converged);
  const double conv = f_equation_residual(r.field, 0.2);
  // -eps^2 lap f + 2 s f - 2 |grad u|^2 equals 2 Re sum conj(u_j) r_j with r_j the GL residual
  double smax = 0.0;
  for (double v : r.field.modulus_sum()) smax = std::max(smax, v);
  CHECK(conv <= 2.0 * 2.0 * std::sqrt(smax) * r.stats.residual_el * (1.0 + 1e-9) + 1e-9);
  opt.strategy = InitStrategy::random;
  opt.seed = 4;
  const double rnd = f_equation_residual(init_field(g, c, opt), 0.2);
  CHECK(rnd > 10.0 * conv);
}

TEST_CASE("zero detection") {
  const Grid g(16);
  ComplexField shifted(g.node_count()), constant(g.node_count(), 1.0), anti(g.node_count());
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const Complex z(g.x(g.i_of(p)) - 0.5, g.y(g.j_of(p)) - 0.5);
    shifted.set(p, z);
    anti.set(p, std::conj(z - Complex(0.21, 0.13)));
  }
  const auto zs = detect_zeros(shifted, g);
  REQUIRE(zs.size() == 1);
  CHECK(zs[0].charge == 1);
  CHECK(std::abs(zs[0].x - 0.5) <= g.h() / 2 + 1e-15);
  CHECK(std::abs(zs[0].y - 0.5) <= g.h() / 2 + 1e-15);
  CHECK(detect_zeros(constant, g).empty());
  const auto za = detect_zeros(anti, g);
  REQUIRE(za.size() == 1);
  CHECK(za[0].charge == -1);
  CHECK(total_charge(za) == -1);
  // the flagged cell contains the zero at (0.71, 0.63)
  CHECK(za[0].i * g.h() <= 0.71);
  CHECK((za[0].i + 1) * g.h() >= 0.71);
  CHECK(za[0].j * g.h() <= 0.63);
  CHECK((za[0].j + 1) * g.h() >= 0.63);
}

TEST_CASE("divergence verdicts") {
  CHECK(component_potential_trace(synthetic({0.2, 0.1}, {1, 4}), 0).verdict == "inconclusive");
  CHECK(component_potential_trace(synthetic({0.4, 0.2, 0.1}, {0, 0, 0}), 0).verdict == "bounded");
  CHECK(component_potential_trace(synthetic({0.4, 0.2, 0.1, 0.05}, {1, 2, 4, 8}), 0).verdict == "diverging");
  CHECK(component_potential_trace(synthetic({0.4, 0.2, 0.1, 0.05}, {1, 2, 4, 4.4}), 0).verdict == "bounded");
  // growth is measured per halving: a quarter-step schedule needs less growth per record
  CHECK(component_potential_trace(synthetic({0.4, 0.2, 0.1}, {1, 1.31, 1.72}), 0).verdict == "diverging");
  CHECK(component_potential_trace(synthetic({0.4, 0.1, 0.025}, {1, 1.6, 2.6}), 0).verdict == "bounded");
  CHECK(component_potential_trace(synthetic({0.4, 0.1, 0.025}, {1, 1.8, 3.3}), 0).verdict == "diverging");
  ContinuationResult partial = synthetic({0.4, 0.2, 0.1}, {1, 2, 4});
  partial.records[1].status = RecordStatus::unconverged;
  const PotentialTrace t = component_potential_trace(partial, 0);
  CHECK(t.verdict == "inconclusive");
  CHECK(t.series.size() == 3);
  CHECK_THROWS_AS(component_potential_trace(partial, 1), std::invalid_argument);
}

TEST_CASE("least-squares log slope") {
  std::vector<double> eps{0.2, 0.1, 0.05}, e;
  for (double x : eps) e.push_back(3.0 + 2.5 * std::log(1 / x));
  CHECK(log_slope(eps, e) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(log_slope({0.1}, {1.0}), std::invalid_argument);
}

TEST_CASE("continuation on constant data") {
  const Grid g(16);
  ContinuationConfig cc;
  cc.margin = 0.125;
  const ContinuationResult r = continuation(g, config_of({{0, {}}, {0, {}}}), {0.4, 0.2, 0.15}, cc);
  REQUIRE(r.records.size() == 3);
  for (const ContinuationRecord& rec : r.records) {
    CHECK(rec.energy.total == 0.0);
    CHECK(rec.f_rel_err == 0.0);
    CHECK(rec.status == RecordStatus::converged);
    CHECK(rec.boundary_winding_ok);
  }
  for (int j = 0; j < 2; ++j) CHECK(component_potential_trace(r, j).verdict == "bounded");
  CHECK(r.beta == 0.0);
  CHECK_FALSE(r.basin_jump);

  std::ostringstream csv;
  write_diagnostics_csv(csv, r, 2);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header ==
        "epsilon,energy_total,dirichlet_total,potential_total,potential_c1,potential_c2,residual_el,"
        "sup_modulus_defect,f_rel_err,pohozaev,rotation_defect,zeros_c1,zeros_c2,status");
  std::getline(lines, row);
  CHECK(row == "0.40000000000000002,0,0,0,0,0,0,0,0,0,0,0,0,converged");
}

TEST_CASE("continuation validates its schedule") {
  const Grid g(8);
  const BoundaryConfig c = config_of({{0, {}}});
  CHECK_THROWS_AS(continuation(g, c, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(continuation(g, c, {0.1, 0.2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(continuation(g, c, {0.1, 0.1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(continuation(g, c, {0.1, -0.1}, {}), std::invalid_argument);
}

TEST_CASE("continuation for degrees (1, 0) on a coarse grid") {
  const Grid g(32);
  ContinuationConfig cc;
  const auto dir = std::filesystem::temp_directory_path() / "glvortex_test_continuation";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  cc.snapshot_dir = dir;
  const std::vector<double> schedule{0.2, 0.1, 0.05, 0.04};
  const ContinuationResult r = continuation(g, config_of({{1, {}}, {0, {}}}), schedule, cc);
  REQUIRE(r.records.size() == 4);
  CHECK(r.first_starts.size() == 4);
  CHECK(r.records[3].status == RecordStatus::under_resolved);  // 0.04 < 2h = 0.0625
  CHECK(r.records[2].status == RecordStatus::under_resolved);
  CHECK(r.records[0].status == RecordStatus::converged);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const ContinuationRecord& rec = r.records[k];
    CHECK(rec.zero_charge[0] == 1);
    CHECK(rec.zero_charge[1] == 0);
    CHECK(rec.boundary_winding_ok);
    CHECK(std::isnan(rec.rotation_defect));
    CHECK(rec.interior_l2_err.size() == 2);
    const Snapshot s = read_snapshot(dir / rec.snapshot);
    CHECK(s.epsilon == rec.epsilon);
    CHECK(std::equal(s.field.data().begin(), s.field.data().end(), r.fields[k].data().begin()));
    if (k > 0) {
      CHECK(rec.energy.total >= r.records[k - 1].energy.total);
      CHECK(rec.potential_total < r.records[k - 1].potential_total);
    }
  }
  CHECK(std::filesystem::exists(dir / "u_star.bin"));
  CHECK(r.u_star_residual.deviation <= 1e-12);
  CHECK(r.u_star_min_modulus[1] >= 1.0 - 1e-9);
  CHECK(r.u_star_max_modulus[1] <= std::sqrt(2.0) + 1e-12);
  std::filesystem::remove_all(dir);
}

TEST_CASE("baseline sweep") {
  const Grid g(32);
  const auto sweeps = baseline_sweep(g, config_of({{1, {}}, {0, {}}}), {0.2, 0.1, 0.05}, {});
  REQUIRE(sweeps.size() == 2);
  CHECK(sweeps[0].degree == 1);
  CHECK(sweeps[0].energy[1] > sweeps[0].energy[0]);
  CHECK(sweeps[0].slope > 0.0);
  for (double e : sweeps[1].energy) CHECK(e == 0.0);
  CHECK(sweeps[1].slope == 0.0);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("a single vortex component has no constrained limit") {
  const Grid g(16);
  ContinuationConfig cc;
  cc.margin = 0.125;
  cc.multistart = false;
  const ContinuationResult r = continuation(g, config_of({{1, {}}}), {0.3}, cc);
  REQUIRE(r.records.size() == 1);
  CHECK_FALSE(r.has_u_star);
  CHECK(std::isnan(r.beta));
  CHECK(std::isnan(r.records[0].f_rel_err));
  CHECK(r.records[0].zero_charge[0] == 1);
  CHECK_THROWS_AS(continuation(g, config_of({{1, {}}}), {0.3}, {}), std::invalid_argument);
}
