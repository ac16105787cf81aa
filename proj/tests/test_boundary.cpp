#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glvortex/boundary.hpp"
#include "glvortex/error.hpp"

using namespace glvortex;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<Complex> circle(int samples, int turns) {
  std::vector<Complex> v;
  for (int k = 0; k < samples; ++k) v.push_back(std::polar(1.0, 2 * kPi * turns * k / samples));
  return v;
}
}  // namespace

TEST_CASE("evaluate_g examples") {
  CHECK(std::abs(evaluate_g({1, {}}, 0.25) - Complex(0, 1)) < 1e-15);
  CHECK(std::abs(evaluate_g({0, {}}, 0.73) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(evaluate_g({2, {}}, 0.5) - Complex(1, 0)) < 1e-14);
  // t outside [0, 1) is reduced
  CHECK(std::abs(evaluate_g({1, {}}, 1.25) - Complex(0, 1)) < 1e-14);
  CHECK(std::abs(evaluate_g({1, {}}, -0.75) - Complex(0, 1)) < 1e-14);
}

TEST_CASE("evaluate_g has unit modulus and uses the phase series") {
  const BoundaryMap m{3, {{1, 0.4, 0.2}, {4, -0.1, 1.0}}, 0.5};
  for (int k = 0; k < 200; ++k) {
    const double t = k / 200.0;
    const Complex z = evaluate_g(m, t);
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);
    const double phase = 2 * kPi * 3 * t + 0.5 + 0.4 * std::sin(2 * kPi * t + 0.2) - 0.1 * std::sin(8 * kPi * t + 1.0);
    CHECK(std::abs(z - std::polar(1.0, phase)) < 1e-13);
  }
}

TEST_CASE("winding number examples") {
  CHECK(winding_number(circle(64, 1)) == 1);
  CHECK(winding_number(std::vector<Complex>(64, Complex(1, 0))) == 0);
  CHECK(winding_number(circle(64, -2)) == -2);
  CHECK(winding_number(circle(8, 1)) == 1);
}

TEST_CASE("winding number errors") {
  CHECK_THROWS_AS(winding_number(circle(7, 0)), UndersampledLoop);
  CHECK_THROWS_AS(winding_number(circle(8, 4)), UndersampledLoop);
  CHECK(winding_number(circle(8, 3)) == 3);
  auto loop = circle(64, 1);
  loop[10] = Complex(1e-9, 0);
  CHECK_THROWS_AS(winding_number(loop), LoopThroughZero);
}

TEST_CASE("sampled boundary maps wind by their degree") {
  for (int n : {8, 16, 64}) {
    const Grid g(n);
    for (int d = 0; d <= 3; ++d) {
      const BoundaryMap m{d, {{1, 0.5, 0.3}, {2, 0.2, 0.0}}};
      CHECK(winding_number(sample_boundary(g, m)) == d);
    }
  }
}

TEST_CASE("lift_phase examples") {
  const std::vector<Complex> ones(32, Complex(1, 0));
  for (double phi : lift_phase(ones)) CHECK(phi == 0.0);
  const std::vector<Complex> eighth(32, std::polar(1.0, kPi / 4));
  for (double phi : lift_phase(eighth)) CHECK(phi == doctest::Approx(kPi / 4).epsilon(1e-15));

  const Grid g(32);
  const BoundaryMap m{0, {{1, 0.3, 0.0}}};
  const auto samples = sample_boundary(g, m);
  const auto phi = lift_phase(samples);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CHECK(std::abs(phi[k] - 0.3 * std::sin(2 * kPi * g.boundary_order()[k].t)) < 1e-12);
    CHECK(std::abs(std::polar(1.0, phi[k]) - samples[k]) < 1e-12);
  }
}

TEST_CASE("lift_phase keeps the first phase in (-pi, pi] and follows large excursions") {
  const Grid g(64);
  const BoundaryMap m{0, {{1, 2.5, 0.0}}, kPi};
  const auto samples = sample_boundary(g, m);
  const auto phi = lift_phase(samples);
  CHECK(phi[0] > -kPi);
  CHECK(phi[0] <= kPi);
  for (std::size_t k = 0; k < samples.size(); ++k) CHECK(std::abs(std::polar(1.0, phi[k]) - samples[k]) < 1e-12);
  double lo = phi[0], hi = phi[0];
  for (double p : phi) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  CHECK(hi - lo > 4.9);  // the lift is continuous, not wrapped
}

TEST_CASE("lift_phase rejects winding loops") {
  const Grid g(16);
  try {
    lift_phase(sample_boundary(g, {2, {}}));
    FAIL("expected NoGlobalLift");
  } catch (const NoGlobalLift& e) {
    CHECK(e.winding() == 2);
  }
}

TEST_CASE("harmonic extension reproduces discrete harmonic data") {
  const Grid g(16);
  const auto& order = g.boundary_order();
  std::vector<double> c(order.size(), 0.7), x(order.size()), q(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double xv = g.x(order[k].i), yv = g.y(order[k].j);
    x[k] = xv;
    q[k] = xv * xv - yv * yv;
  }
  const auto fc = harmonic_extension(g, c);
  const auto fx = harmonic_extension(g, x);
  const auto fq = harmonic_extension(g, q);
  for (std::size_t p = 0; p < g.node_count(); ++p) {
    const double xv = g.x(g.i_of(p)), yv = g.y(g.j_of(p));
    CHECK(fc[p] == 0.7);
    CHECK(std::abs(fx[p] - xv) < 1e-11);
    CHECK(std::abs(fq[p] - (xv * xv - yv * yv)) < 1e-11);
  }
}

TEST_CASE("complex harmonic extension and residual") {
  const Grid g(32);
  const auto samples = sample_boundary(g, {1, {{2, 0.3, 0.0}}});
  const ComplexField u = harmonic_extension(g, samples);
  for (std::size_t k = 0; k < samples.size(); ++k) CHECK(u[g.boundary_order()[k].index] == samples[k]);
  const ComplexField lap = laplacian(g, u);
  double worst = 0.0;
  for (std::size_t p = 0; p < g.node_count(); ++p) worst = std::max(worst, std::abs(lap[p]) * g.h() * g.h());
  CHECK(worst < 1e-10);
}

TEST_CASE("harmonic extension validates input") {
  const Grid g(8);
  CHECK_THROWS_AS(harmonic_extension(g, std::vector<double>(5, 0.0)), std::invalid_argument);
  std::vector<double> bad(g.boundary_order().size(), 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(harmonic_extension(g, bad), std::invalid_argument);
  HarmonicOptions starved;
  starved.max_iterations = 1;
  std::vector<double> data(g.boundary_order().size());
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = std::sin(7.0 * k);
  CHECK_THROWS_AS(harmonic_extension(g, data, starved), SolverError);
}

TEST_CASE("boundary config validation") {
  BoundaryConfig empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  BoundaryConfig negative;
  negative.maps = {{-1, {}}};
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
  BoundaryConfig ok;
  ok.maps = {{1, {}}, {0, {}}};
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.n() == 2);
}

TEST_CASE("rotation family detection") {
  const Grid g(16);
  BoundaryConfig rot;
  rot.maps = {{1, {{1, 0.3, 0.0}}}, {1, {{1, 0.3, 0.0}}, 1.0}, {1, {{1, 0.3, 0.0}}, -0.5}};
  const auto gammas = rotation_gammas(g, rot);
  REQUIRE(gammas.has_value());
  CHECK((*gammas)[0] == 0.0);
  CHECK((*gammas)[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((*gammas)[2] == doctest::Approx(-0.5).epsilon(1e-12));
  BoundaryConfig other;
  other.maps = {{0, {{1, 0.3, 0.0}}}, {0, {{1, 0.6, 0.0}}}};
  CHECK_FALSE(rotation_gammas(g, other).has_value());
}
