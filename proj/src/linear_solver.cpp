#include "glvortex/linear_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "glvortex/kernels.hpp"

namespace glvortex {

CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            std::span<double> x, const CgOptions& options,
                            std::span<const double> inverse_diagonal) {
  const std::size_t len = b.size();
  if (x.size() != len) throw std::invalid_argument("conjugate_gradient: size mismatch");
  const bool precondition = !inverse_diagonal.empty();
  if (precondition && inverse_diagonal.size() != len) {
    throw std::invalid_argument("conjugate_gradient: preconditioner size mismatch");
  }
  const auto& k = kernels::active();

  std::vector<double> r(len), z, p(len), ap(len);
  CgResult result;
  const double bnorm = std::sqrt(k.dot(b.data(), b.data(), len));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  apply(x, r);
  for (std::size_t i = 0; i < len; ++i) r[i] = b[i] - r[i];
  auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
    for (std::size_t i = 0; i < len; ++i) out[i] = inverse_diagonal[i] * in[i];
  };
  if (precondition) {
    z.resize(len);
    precond(r, z);
    p = z;
  } else {
    p = r;
  }
  const std::vector<double>& zr = precondition ? z : r;
  double rz = k.dot(r.data(), zr.data(), len);
  double rnorm = std::sqrt(k.dot(r.data(), r.data(), len));

  const double target = options.relative_tolerance * bnorm;
  int it = 0;
  while (rnorm > target && it < options.max_iterations) {
    apply(p, ap);
    const double pap = k.dot(p.data(), ap.data(), len);
    if (!(pap > 0.0)) {
      result.negative_curvature = true;
      break;
    }
    const double alpha = rz / pap;
    k.axpy(alpha, p.data(), x.data(), len);
    k.axpy(-alpha, ap.data(), r.data(), len);
    ++it;
    rnorm = std::sqrt(k.dot(r.data(), r.data(), len));
    if (precondition) precond(r, z);
    const double rz_next = k.dot(r.data(), zr.data(), len);
    const double beta = rz_next / rz;
    rz = rz_next;
    k.xpby(zr.data(), beta, p.data(), len);
  }
  result.iterations = it;
  result.relative_residual = rnorm / bnorm;
  result.converged = rnorm <= target;
  return result;
}

}  // namespace glvortex
