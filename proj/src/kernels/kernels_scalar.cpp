#include "glvortex/kernels.hpp"

namespace glvortex::kernels {
namespace {

void laplacian_scalar(const double* in, double* out, int n, double inv_h2) {
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    for (int i = 1; i < n; ++i) {
      const std::size_t p = row + i;
      out[p] = (in[p + 1] + in[p - 1] + in[p + side] + in[p - side] - 4.0 * in[p]) * inv_h2;
    }
  }
}

void zero_boundary(double* out, int n) {
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  for (std::size_t i = 0; i < side; ++i) {
    out[i] = 0.0;
    out[n * side + i] = 0.0;
    out[i * side] = 0.0;
    out[i * side + n] = 0.0;
  }
}

void helmholtz_scalar(const double* in, double* out, int n, double shift, double inv_h2) {
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    for (int i = 1; i < n; ++i) {
      const std::size_t p = row + i;
      const double lap = (in[p + 1] + in[p - 1] + in[p + side] + in[p - side] - 4.0 * in[p]) * inv_h2;
      out[p] = shift * in[p] - lap;
    }
  }
  zero_boundary(out, n);
}

void gl_hessian_scalar(const GlHessianArgs& a, const double* in, double* out) {
  const int n = a.n_cells;
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    for (int i = 1; i < n; ++i) {
      const std::size_t p = row + i;
      double s = 0.0;
      for (int c = 0; c < a.planes; ++c) s += a.u[c * a.stride + p] * in[c * a.stride + p];
      const double diag = a.shift - a.f[p];
      const double cs = a.coef * s;
      for (int c = 0; c < a.planes; ++c) {
        const double* x = in + c * a.stride;
        const double lap = (x[p + 1] + x[p - 1] + x[p + side] + x[p - side] - 4.0 * x[p]) * a.inv_h2;
        out[c * a.stride + p] = diag * x[p] - lap + cs * a.u[c * a.stride + p];
      }
    }
  }
  for (int c = 0; c < a.planes; ++c) zero_boundary(out + c * a.stride, n);
}

double dot_scalar(const double* a, const double* b, std::size_t len) {
  // Four interleaved partial sums, combined in a fixed order.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < len; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] += alpha * x[k];
}

void xpby_scalar(const double* x, double beta, double* y, std::size_t len) {
  for (std::size_t k = 0; k < len; ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar",        laplacian_scalar, helmholtz_scalar, gl_hessian_scalar,
                                 dot_scalar,      axpy_scalar,      xpby_scalar};
  return table;
}

}  // namespace glvortex::kernels
