#include "glvortex/boundary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "glvortex/error.hpp"
#include "glvortex/kernels.hpp"
#include "glvortex/linear_solver.hpp"

namespace glvortex {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double phase_increment(Complex from, Complex to) {
  const Complex q = to * std::conj(from);
  return std::atan2(q.imag(), q.real());
}
}  // namespace

double BoundaryMap::perturbation(double t) const {
  double s = offset;
  for (const PhaseTerm& term : psi) s += term.amplitude * std::sin(kTwoPi * term.frequency * t + term.phase);
  return s;
}

void BoundaryConfig::validate() const {
  if (maps.empty()) throw std::invalid_argument("boundary config needs at least one component");
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (maps[j].degree < 0) {
      throw std::invalid_argument("component " + std::to_string(j) + ": negative degree " +
                                  std::to_string(maps[j].degree));
    }
  }
}

Complex evaluate_g(const BoundaryMap& map, double t) {
  t -= std::floor(t);
  return std::polar(1.0, kTwoPi * map.degree * t + map.perturbation(t));
}

std::vector<Complex> sample_boundary(const Grid& grid, const BoundaryMap& map) {
  std::vector<Complex> out;
  out.reserve(grid.boundary_order().size());
  for (const BoundaryNode& b : grid.boundary_order()) out.push_back(evaluate_g(map, b.t));
  return out;
}

int winding_number(std::span<const Complex> loop) {
  if (loop.size() < 8) throw UndersampledLoop("winding_number: need at least 8 samples");
  for (std::size_t k = 0; k < loop.size(); ++k) {
    if (std::abs(loop[k]) < 1e-8) throw LoopThroughZero("winding_number: sample " + std::to_string(k) + " is zero");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const double d = phase_increment(loop[k], loop[(k + 1) % loop.size()]);
    if (std::abs(d) >= std::numbers::pi - 0.1) {
      throw UndersampledLoop("winding_number: phase jump " + std::to_string(d) + " after sample " +
                             std::to_string(k));
    }
    total += d;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<double> lift_phase(std::span<const Complex> samples) {
  const int w = winding_number(samples);
  if (w != 0) throw NoGlobalLift(w);
  std::vector<double> phi(samples.size());
  phi[0] = std::arg(samples[0]);
  if (phi[0] <= -std::numbers::pi) phi[0] = std::numbers::pi;
  for (std::size_t k = 1; k < samples.size(); ++k) phi[k] = phi[k - 1] + phase_increment(samples[k - 1], samples[k]);
  return phi;
}

ScalarField harmonic_extension(const Grid& grid, std::span<const double> boundary_values,
                               const HarmonicOptions& options) {
  const auto& order = grid.boundary_order();
  if (boundary_values.size() != order.size()) {
    throw std::invalid_argument("harmonic_extension: expected one value per boundary node");
  }
  const int n = grid.n_cells();
  const std::size_t count = grid.node_count();
  ScalarField lifted(count, 0.0);
  double scale = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (!std::isfinite(boundary_values[k])) throw std::invalid_argument("harmonic_extension: non-finite data");
    lifted[order[k].index] = boundary_values[k];
    scale = std::max(scale, std::abs(boundary_values[k]));
  }
  if (scale == 0.0) return lifted;

  // Start the interior at the boundary mean; constant data is then reproduced exactly.
  bool constant = true;
  double mean = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    constant = constant && boundary_values[k] == boundary_values[0];
    mean += boundary_values[k];
  }
  mean = constant ? boundary_values[0] : mean / static_cast<double>(order.size());
  for (int j = 1; j < n; ++j) {
    for (int i = 1; i < n; ++i) lifted[grid.index(i, j)] = mean;
  }

  // Unknown is the interior correction x (zero on the boundary):
  // -lap_h x = lap_h(lifted), written in units of h^2.
  const auto& k = kernels::active();
  ScalarField rhs(count, 0.0);
  k.laplacian(lifted.data(), rhs.data(), n, 1.0);
  ScalarField x(count, 0.0);
  const LinearOperator apply = [&](std::span<const double> in, std::span<double> out) {
    k.helmholtz(in.data(), out.data(), n, 0.0, 1.0);
  };
  CgOptions cg;
  cg.relative_tolerance = 1e-13;
  cg.max_iterations = options.max_iterations > 0 ? options.max_iterations : 50 * n + 1000;
  conjugate_gradient(apply, rhs, x, cg);

  for (std::size_t p = 0; p < count; ++p) lifted[p] += x[p];
  ScalarField residual(count, 0.0);
  k.laplacian(lifted.data(), residual.data(), n, 1.0);
  double worst = 0.0;
  for (double r : residual) worst = std::max(worst, std::abs(r));
  if (worst > options.tolerance * scale) {
    throw SolverError("harmonic_extension: no convergence, residual " + std::to_string(worst), worst);
  }
  return lifted;
}

ComplexField harmonic_extension(const Grid& grid, std::span<const Complex> boundary_values,
                                const HarmonicOptions& options) {
  std::vector<double> re(boundary_values.size()), im(boundary_values.size());
  for (std::size_t k = 0; k < boundary_values.size(); ++k) {
    re[k] = boundary_values[k].real();
    im[k] = boundary_values[k].imag();
  }
  ComplexField out;
  out.re = harmonic_extension(grid, re, options);
  out.im = harmonic_extension(grid, im, options);
  return out;
}

std::optional<std::vector<double>> rotation_gammas(const Grid& grid, const BoundaryConfig& config,
                                                   double tolerance) {
  if (config.n() < 1) return std::nullopt;
  const auto first = sample_boundary(grid, config.maps[0]);
  std::vector<double> gammas(config.maps.size(), 0.0);
  for (std::size_t j = 1; j < config.maps.size(); ++j) {
    const auto other = sample_boundary(grid, config.maps[j]);
    const Complex r0 = other[0] * std::conj(first[0]);
    for (std::size_t k = 1; k < other.size(); ++k) {
      if (std::abs(other[k] * std::conj(first[k]) - r0) > tolerance) return std::nullopt;
    }
    gammas[j] = std::arg(r0);
  }
  return gammas;
}

}  // namespace glvortex

namespace glvortex {

BoundarySamples sample_all(const Grid& grid, const BoundaryConfig& config) {
  BoundarySamples out;
  out.reserve(config.maps.size());
  for (const BoundaryMap& m : config.maps) out.push_back(sample_boundary(grid, m));
  return out;
}

}  // namespace glvortex
