#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace glvortex {

// y = A x for a symmetric operator on flat vectors.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct CgOptions {
  double relative_tolerance = 1e-10;  // on the 2-norm of the residual, relative to |b|
  int max_iterations = 10000;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool negative_curvature = false;  // p^T A p <= 0 was seen; x holds the last good iterate
};

// Preconditioned conjugate gradients from the initial guess in x. inverse_diagonal,
// when non-empty, is a Jacobi preconditioner.
CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            std::span<double> x, const CgOptions& options,
                            std::span<const double> inverse_diagonal = {});

}  // namespace glvortex
