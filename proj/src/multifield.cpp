#include "glvortex/multifield.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace glvortex {

MultiField::MultiField(const Grid& grid, int n) : grid_(grid), n_(n) {
  if (n < 1) throw std::invalid_argument("MultiField needs at least one component");
  data_.assign(static_cast<std::size_t>(2 * n) * grid.node_count(), 0.0);
}

ComplexField MultiField::component(int j) const {
  ComplexField f;
  auto re = plane(2 * j);
  auto im = plane(2 * j + 1);
  f.re.assign(re.begin(), re.end());
  f.im.assign(im.begin(), im.end());
  return f;
}

void MultiField::set_component(int j, const ComplexField& f) {
  if (f.size() != stride()) throw std::invalid_argument("set_component: size mismatch");
  std::copy(f.re.begin(), f.re.end(), plane(2 * j).begin());
  std::copy(f.im.begin(), f.im.end(), plane(2 * j + 1).begin());
}

ScalarField MultiField::modulus_sum() const {
  ScalarField s(stride(), 0.0);
  for (int c = 0; c < planes(); ++c) {
    auto x = plane(c);
    for (std::size_t p = 0; p < stride(); ++p) s[p] += x[p] * x[p];
  }
  return s;
}

bool MultiField::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void pin_boundary(MultiField& psi, const BoundarySamples& samples) {
  if (static_cast<int>(samples.size()) != psi.n()) throw std::invalid_argument("pin_boundary: component count");
  const auto& order = psi.grid().boundary_order();
  for (int j = 0; j < psi.n(); ++j) {
    if (samples[j].size() != order.size()) throw std::invalid_argument("pin_boundary: sample count");
    for (std::size_t k = 0; k < order.size(); ++k) psi.set(j, order[k].index, samples[j][k]);
  }
}

std::string to_string(InitStrategy s) {
  switch (s) {
    case InitStrategy::harmonic: return "harmonic";
    case InitStrategy::vortex_product: return "vortex_product";
    case InitStrategy::random: return "random";
  }
  return "unknown";
}

namespace {

std::vector<std::array<double, 2>> default_vortices(int degree) {
  std::vector<std::array<double, 2>> pts;
  if (degree == 1) {
    pts.push_back({0.5, 0.5});
  } else {
    for (int k = 0; k < degree; ++k) {
      const double a = 2.0 * std::numbers::pi * k / degree;
      pts.push_back({0.5 + 0.25 * std::cos(a), 0.5 + 0.25 * std::sin(a)});
    }
  }
  return pts;
}

bool on_lattice(double v, double h) {
  const double k = std::round(v / h);
  return std::abs(v - k * h) < 1e-12;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

MultiField init_field(const Grid& grid, const BoundaryConfig& config, const InitOptions& options,
                      std::vector<std::string>* warnings) {
  config.validate();
  const int n = config.n();
  MultiField psi(grid, n);
  const BoundarySamples samples = sample_all(grid, config);
  const int side = grid.side();

  switch (options.strategy) {
    case InitStrategy::harmonic:
      for (int j = 0; j < n; ++j) psi.set_component(j, harmonic_extension(grid, samples[j]));
      break;
    case InitStrategy::vortex_product:
      for (int j = 0; j < n; ++j) {
        const bool given = j < static_cast<int>(options.vortex_points.size()) && !options.vortex_points[j].empty();
        auto pts = given ? options.vortex_points[j] : default_vortices(config.maps[j].degree);
        for (auto& a : pts) {
          if (on_lattice(a[0], grid.h()) && on_lattice(a[1], grid.h())) {
            if (warnings && given) {
              warnings->push_back("vortex point (" + std::to_string(a[0]) + ", " + std::to_string(a[1]) +
                                  ") of component " + std::to_string(j) + " lies on a node; shifted by h/2");
            }
            a[0] += 0.5 * grid.h();
            a[1] += 0.5 * grid.h();
          }
        }
        for (int jj = 0; jj < side; ++jj) {
          for (int ii = 0; ii < side; ++ii) {
            Complex z{1.0, 0.0};
            for (const auto& a : pts) {
              const Complex d{grid.x(ii) - a[0], grid.y(jj) - a[1]};
              z *= d / std::abs(d);
            }
            psi.set(j, grid.index(ii, jj), z);
          }
        }
      }
      break;
    case InitStrategy::random: {
      std::mt19937_64 rng(options.seed);
      for (int j = 0; j < n; ++j) {
        for (int jj = 1; jj < grid.n_cells(); ++jj) {
          for (int ii = 1; ii < grid.n_cells(); ++ii) {
            const double r = std::sqrt(unit_uniform(rng));
            const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
            psi.set(j, grid.index(ii, jj), std::polar(r, theta));
          }
        }
      }
      break;
    }
  }
  pin_boundary(psi, samples);
  return psi;
}

EnergyReport energy_gl(const MultiField& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("energy_gl: epsilon must be positive");
  const Grid& g = psi.grid();
  const int n = g.n_cells();
  const int side = g.side();
  EnergyReport rep;
  rep.epsilon = epsilon;
  const double inv_eps2 = 1.0 / (epsilon * epsilon);

  for (int comp = 0; comp < psi.n(); ++comp) {
    double sum = 0.0;
    for (int part = 0; part < 2; ++part) {
      const auto x = psi.plane(2 * comp + part);
      for (int j = 0; j <= n; ++j) {
        const double cx = (j == 0 || j == n) ? 0.5 : 1.0;
        double row = 0.0;
        for (int i = 0; i < n; ++i) {
          const std::size_t p = static_cast<std::size_t>(j) * side + i;
          const double d = x[p + 1] - x[p];
          row += d * d;
        }
        sum += cx * row;
      }
      for (int j = 0; j < n; ++j) {
        double row = 0.0;
        for (int i = 0; i <= n; ++i) {
          const std::size_t p = static_cast<std::size_t>(j) * side + i;
          const double d = x[p + side] - x[p];
          const double cy = (i == 0 || i == n) ? 0.5 : 1.0;
          row += cy * d * d;
        }
        sum += row;
      }
    }
    rep.dirichlet_per_component.push_back(0.5 * sum);
    rep.dirichlet_total += 0.5 * sum;
  }

  const ScalarField s = psi.modulus_sum();
  ScalarField density(s.size());
  const double nn = psi.n();
  for (std::size_t p = 0; p < s.size(); ++p) density[p] = (nn - s[p]) * (nn - s[p]);
  rep.potential_total = 0.25 * inv_eps2 * integrate(g, density);

  for (int comp = 0; comp < psi.n(); ++comp) {
    for (std::size_t p = 0; p < s.size(); ++p) {
      const double m = 1.0 - std::norm(psi.value(comp, p));
      density[p] = m * m;
    }
    rep.potential_per_component.push_back(inv_eps2 * integrate(g, density));
  }
  rep.total = rep.dirichlet_total + rep.potential_total;
  return rep;
}

MultiField grad_energy_gl(const MultiField& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("grad_energy_gl: epsilon must be positive");
  const Grid& g = psi.grid();
  const double h2 = g.h() * g.h();
  const ScalarField f = f_epsilon_field(psi, epsilon);
  MultiField grad(g, psi.n());
  for (int c = 0; c < psi.planes(); ++c) {
    const auto x = psi.plane(c);
    auto out = grad.plane(c);
    const ScalarField lap = laplacian(g, x);
    for (int j = 1; j < g.n_cells(); ++j) {
      for (int i = 1; i < g.n_cells(); ++i) {
        const std::size_t p = g.index(i, j);
        out[p] = h2 * (-lap[p] - f[p] * x[p]);
      }
    }
  }
  return grad;
}

double energy_dirichlet(const MultiField& psi) {
  // Any epsilon works; only the Dirichlet part is used.
  return 2.0 * energy_gl(psi, 1.0).dirichlet_total;
}

ScalarField f_epsilon_field(const MultiField& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("f_epsilon_field: epsilon must be positive");
  ScalarField s = psi.modulus_sum();
  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  for (double& v : s) v = (psi.n() - v) * inv_eps2;
  return s;
}

ScalarField centered_gradient_sq(const MultiField& psi, int j) {
  const Grid& g = psi.grid();
  const int side = g.side();
  const double inv2h = 0.5 / g.h();
  ScalarField out(g.node_count(), 0.0);
  for (int part = 0; part < 2; ++part) {
    const auto x = psi.plane(2 * j + part);
    for (int jj = 1; jj < g.n_cells(); ++jj) {
      for (int ii = 1; ii < g.n_cells(); ++ii) {
        const std::size_t p = g.index(ii, jj);
        const double dx = (x[p + 1] - x[p - 1]) * inv2h;
        const double dy = (x[p + side] - x[p - side]) * inv2h;
        out[p] += dx * dx + dy * dy;
      }
    }
  }
  return out;
}

ScalarField edge_gradient_sq(const MultiField& psi, int j) {
  const Grid& g = psi.grid();
  const int side = g.side();
  const double scale = 0.5 / (g.h() * g.h());
  ScalarField out(g.node_count(), 0.0);
  for (int part = 0; part < 2; ++part) {
    const auto x = psi.plane(2 * j + part);
    for (int jj = 1; jj < g.n_cells(); ++jj) {
      for (int ii = 1; ii < g.n_cells(); ++ii) {
        const std::size_t p = g.index(ii, jj);
        const double e = x[p + 1] - x[p], w = x[p - 1] - x[p];
        const double nn = x[p + side] - x[p], s = x[p - side] - x[p];
        out[p] += scale * (e * e + w * w + nn * nn + s * s);
      }
    }
  }
  return out;
}

}  // namespace glvortex
