#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glvortex/error.hpp"
#include "glvortex/harmonic.hpp"

using namespace glvortex;

namespace {

constexpr double kPi = std::numbers::pi;

BoundaryConfig config_of(std::vector<BoundaryMap> maps) {
  BoundaryConfig c;
  c.maps = std::move(maps);
  return c;
}

MultiField analytic_rotation_field(const Grid& g, double gamma) {
  // phi = 0.8 (x^2 - y^2) + 0.5 x y is harmonic; u_j = exp(i (phi + gamma_j))
  MultiField u(g, 2);
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const double x = g.x(g.i_of(p)), y = g.y(g.j_of(p));
    const double phi = 0.8 * (x * x - y * y) + 0.5 * x * y;
    u.set(0, p, std::polar(1.0, phi));
    u.set(1, p, std::polar(1.0, phi + gamma));
  }
  return u;
}

}  // namespace

TEST_CASE("project_sphere examples") {
  const Grid g(4);
  MultiField v(g, 2);
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    v.set(0, p, 2.0);
    v.set(1, p, 0.0);
  }
  v.set(0, 7, 3.0);
  v.set(1, 7, 4.0);
  const MultiField w = project_sphere(v);
  CHECK(std::abs(w.value(0, 0) - Complex(std::sqrt(2.0))) < 1e-15);
  CHECK(w.value(1, 0) == Complex(0.0));
  CHECK(std::abs(w.value(0, 7) - Complex(3 * std::sqrt(2.0) / 5)) < 1e-15);
  CHECK(std::abs(w.value(1, 7) - Complex(4 * std::sqrt(2.0) / 5)) < 1e-15);

  // a field already on the sphere is left alone
  const MultiField ww = project_sphere(w);
  for (std::size_t q = 0; q < w.data().size(); ++q) CHECK(std::abs(ww.data()[q] - w.data()[q]) <= 1e-15);
}

TEST_CASE("project_sphere on random admissible fields") {
  const Grid g(16);
  InitOptions opt;
  opt.strategy = InitStrategy::random;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    opt.seed = seed;
    const MultiField v = init_field(g, config_of({{1, {}}, {0, {}}, {2, {}}}), opt);
    const MultiField w = project_sphere(v), ww = project_sphere(w);
    for (double s : w.modulus_sum()) CHECK(std::abs(s - 3.0) <= 1e-12);
    for (std::size_t q = 0; q < w.data().size(); ++q) CHECK(std::abs(ww.data()[q] - w.data()[q]) <= 1e-14);
  }
}

TEST_CASE("project_sphere names the failing node") {
  const Grid g(4);
  MultiField v(g, 2);
  for (std::size_t p = 0; p < g.node_count(); ++p) v.set(0, p, 1.0);
  v.set(0, g.index(2, 3), 1e-6);
  try {
    project_sphere(v);
    FAIL("expected ProjectionUndefined");
  } catch (const ProjectionUndefined& e) {
    CHECK(e.i() == 2);
    CHECK(e.j() == 3);
    CHECK(std::string(e.what()).find("(2, 3)") != std::string::npos);
  }
}

TEST_CASE("residual_harmonic of a constant sphere field") {
  const Grid g(8);
  MultiField u(g, 2);
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    u.set(0, p, std::polar(1.0, 0.4));
    u.set(1, p, std::polar(1.0, -2.0));
  }
  const HarmonicResidual r = residual_harmonic(u);
  CHECK(r.residual == 0.0);
  CHECK(r.deviation < 1e-15);
}

TEST_CASE("residual_harmonic of an analytic rotation-family solution is second order") {
  std::vector<double> res;
  for (int n : {32, 64, 128}) {
    const HarmonicResidual r = residual_harmonic(analytic_rotation_field(Grid(n), 1.0));
    CHECK(r.deviation < 1e-14);
    res.push_back(r.residual);
  }
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("solve_beta examples") {
  SUBCASE("constant data") {
    const Grid g(16);
    const BetaResult b = solve_beta(g, config_of({{0, {}}, {0, {}}}));
    CHECK(b.beta == 0.0);
    CHECK(b.converged);
    for (std::size_t p = 0; p < g.node_count(); ++p) CHECK(b.field.value(1, p) == Complex(1.0));
  }
  SUBCASE("rotation by i") {
    const Grid g(32);
    const BetaResult b = solve_beta(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, kPi / 2}}));
    CHECK(b.converged);
    CHECK(b.residual.residual <= BetaConfig{}.tol);
    CHECK(b.residual.deviation <= 1e-12);
    double worst = 0.0;
    for (std::size_t p = 0; p < g.node_count(); ++p) {
      worst = std::max(worst, std::abs(b.field.value(1, p) - Complex(0, 1) * b.field.value(0, p)));
    }
    CHECK(worst < 1e-8);
    const AlphaResult a = solve_alpha(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, kPi / 2}}));
    double diff = 0.0;
    for (std::size_t q = 0; q < a.field.data().size(); ++q) {
      diff = std::max(diff, std::abs(a.field.data()[q] - b.field.data()[q]));
    }
    CHECK(diff < 1e-8);
  }
  SUBCASE("degrees (1, 0) under refinement") {
    const BoundaryConfig c = config_of({{1, {}}, {0, {}}});
    const BetaResult b64 = solve_beta(Grid(64), c);
    const BetaResult b128 = solve_beta(Grid(128), c);
    CHECK(b64.converged);
    CHECK(b128.converged);
    CHECK(std::isfinite(b64.beta));
    CHECK(std::abs(b128.beta - b64.beta) / b64.beta < 0.05);
    CHECK(b128.beta == doctest::Approx(energy_dirichlet(b128.field)));
    CHECK(b128.residual.deviation <= 1e-12);
  }
}

TEST_CASE("solve_beta never ends above its starts") {
  const Grid g(32);
  const BoundaryConfig c = config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.6, 0.0}}}});
  const AlphaResult a = solve_alpha(g, c);
  const BetaResult b = solve_beta(g, c, {}, {a.field});
  REQUIRE(b.start_energies.size() == 2);
  CHECK(b.beta <= a.alpha);
  CHECK(b.beta <= b.start_energies[0] + 1e-12);
  CHECK_THROWS_AS(solve_beta(g, c, {}, {MultiField(Grid(16), 2)}), std::invalid_argument);
}

TEST_CASE("solve_alpha examples") {
  const Grid g(32);
  SUBCASE("constant data") {
    const AlphaResult a = solve_alpha(g, config_of({{0, {}}, {0, {}}}));
    CHECK(a.alpha == 0.0);
  }
  SUBCASE("unit modulus and energy") {
    const AlphaResult a = solve_alpha(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{2, 0.5, 1.0}}}}));
    for (int j = 0; j < 2; ++j) {
      for (std::size_t p = 0; p < g.node_count(); ++p) CHECK(std::abs(std::abs(a.field.value(j, p)) - 1.0) < 1e-12);
    }
    CHECK(a.alpha == energy_dirichlet(a.field));
  }
  SUBCASE("rotation family: equal phase gradients") {
    const AlphaResult a = solve_alpha(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, 1.0}}));
    const int side = g.side();
    for (int j = 1; j < 32; ++j) {
      for (int i = 1; i < 32; ++i) {
        const std::size_t p = g.index(i, j);
        for (std::size_t off : {std::size_t{1}, static_cast<std::size_t>(side)}) {
          const double d0 = a.phases[0][p + off] - a.phases[0][p - off];
          const double d1 = a.phases[1][p + off] - a.phases[1][p - off];
          CHECK(std::abs(d0 - d1) < 1e-10);
        }
      }
    }
  }
  SUBCASE("nonzero degree") {
    CHECK_THROWS_AS(solve_alpha(g, config_of({{1, {}}, {0, {}}})), AlphaUndefined);
    CHECK_THROWS_WITH_AS(solve_alpha(g, config_of({{0, {}}, {2, {}}})), "alpha undefined: nonzero degree",
                         AlphaUndefined);
  }
}

TEST_CASE("alpha and beta reports") {
  const Grid g(32);
  const AlphaBetaReport constant = alpha_beta(g, config_of({{0, {}}, {0, {}}}));
  REQUIRE(constant.alpha.has_value());
  CHECK(*constant.alpha == 0.0);
  CHECK(constant.beta == 0.0);
  CHECK(*constant.gap == 0.0);

  const AlphaBetaReport lam2 = alpha_beta(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.6, 0.0}}}}));
  REQUIRE(lam2.gap.has_value());
  CHECK(*lam2.gap > 0.0);
  CHECK(lam2.beta_converged);

  const AlphaBetaReport rot = alpha_beta(g, config_of({{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.3, 0.0}}, 1.0}}));
  REQUIRE(rot.gap.has_value());
  CHECK(std::abs(*rot.gap) <= 1e-8 * *rot.alpha);
  CHECK(rot.gradient_mismatch < 1e-4);

  const AlphaBetaReport d10 = alpha_beta(g, config_of({{1, {}}, {0, {}}}));
  CHECK_FALSE(d10.alpha.has_value());
  CHECK_FALSE(d10.gap.has_value());
  CHECK(d10.alpha_text() == "undefined (nonzero degree)");
  CHECK(std::isfinite(d10.beta));
  CHECK(d10.beta > 0.0);
}

TEST_CASE("lambda1 against the closed form and the continuum value") {
  for (int n : {16, 32, 64}) {
    const Grid g(n);
    const double l = lambda1(g);
    CHECK(std::abs(l - lambda1_closed_form(g)) / lambda1_closed_form(g) < 1e-9);
  }
  const double two_pi2 = 2 * kPi * kPi;
  CHECK(std::abs(lambda1(Grid(64)) - two_pi2) / two_pi2 < 0.002);
  CHECK(lambda1(Grid(32)) < lambda1(Grid(64)));
  CHECK(lambda1(Grid(64)) < two_pi2);
  CHECK_THROWS_AS(lambda1(Grid(64), 1e-10, 1), SolverError);
}

TEST_CASE("rotation threshold") {
  const Grid g(64);
  CHECK(rotation_threshold(2, g) == doctest::Approx(1 / kPi).epsilon(1e-3));
  CHECK(rotation_threshold(1, g) == doctest::Approx(1 / (std::sqrt(2.0) * kPi)).epsilon(1e-3));
  CHECK(rotation_threshold(4, g) == doctest::Approx(std::sqrt(2.0) / kPi).epsilon(1e-3));
  CHECK(rotation_threshold(2, g) == doctest::Approx(std::sqrt(2 / lambda1(g))).epsilon(1e-14));
  CHECK_THROWS_AS(rotation_threshold(0, g), std::invalid_argument);
}
