// Compiled with -mavx2 -mfma; only reached through avx2_table() after a
// runtime CPU check.

#include <immintrin.h>

#include "glvortex/kernels.hpp"

namespace glvortex::kernels {
namespace {

inline __m256d stencil4(const double* x, std::size_t p, std::size_t side, __m256d four) {
  const __m256d c = _mm256_loadu_pd(x + p);
  __m256d s = _mm256_add_pd(_mm256_loadu_pd(x + p + 1), _mm256_loadu_pd(x + p - 1));
  s = _mm256_add_pd(s, _mm256_loadu_pd(x + p + side));
  s = _mm256_add_pd(s, _mm256_loadu_pd(x + p - side));
  return _mm256_fnmadd_pd(four, c, s);  // s - 4c
}

void laplacian_avx2(const double* in, double* out, int n, double inv_h2) {
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d scale = _mm256_set1_pd(inv_h2);
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    int i = 1;
    for (; i + 4 <= n; i += 4) {
      const std::size_t p = row + i;
      _mm256_storeu_pd(out + p, _mm256_mul_pd(stencil4(in, p, side, four), scale));
    }
    for (; i < n; ++i) {
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

void helmholtz_avx2(const double* in, double* out, int n, double shift, double inv_h2) {
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d scale = _mm256_set1_pd(inv_h2);
  const __m256d vshift = _mm256_set1_pd(shift);
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    int i = 1;
    for (; i + 4 <= n; i += 4) {
      const std::size_t p = row + i;
      const __m256d lap = _mm256_mul_pd(stencil4(in, p, side, four), scale);
      _mm256_storeu_pd(out + p, _mm256_fmsub_pd(vshift, _mm256_loadu_pd(in + p), lap));
    }
    for (; i < n; ++i) {
      const std::size_t p = row + i;
      const double lap = (in[p + 1] + in[p - 1] + in[p + side] + in[p - side] - 4.0 * in[p]) * inv_h2;
      out[p] = shift * in[p] - lap;
    }
  }
  zero_boundary(out, n);
}

void gl_hessian_avx2(const GlHessianArgs& a, const double* in, double* out) {
  const int n = a.n_cells;
  const std::size_t side = static_cast<std::size_t>(n) + 1;
  const __m256d four = _mm256_set1_pd(4.0);
  const __m256d scale = _mm256_set1_pd(a.inv_h2);
  const __m256d vshift = _mm256_set1_pd(a.shift);
  const __m256d vcoef = _mm256_set1_pd(a.coef);
  for (int j = 1; j < n; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * side;
    int i = 1;
    for (; i + 4 <= n; i += 4) {
      const std::size_t p = row + i;
      __m256d s = _mm256_setzero_pd();
      for (int c = 0; c < a.planes; ++c) {
        s = _mm256_fmadd_pd(_mm256_loadu_pd(a.u + c * a.stride + p), _mm256_loadu_pd(in + c * a.stride + p), s);
      }
      const __m256d diag = _mm256_sub_pd(vshift, _mm256_loadu_pd(a.f + p));
      const __m256d cs = _mm256_mul_pd(vcoef, s);
      for (int c = 0; c < a.planes; ++c) {
        const double* x = in + c * a.stride;
        const __m256d lap = _mm256_mul_pd(stencil4(x, p, side, four), scale);
        __m256d r = _mm256_fmsub_pd(diag, _mm256_loadu_pd(x + p), lap);
        r = _mm256_fmadd_pd(cs, _mm256_loadu_pd(a.u + c * a.stride + p), r);
        _mm256_storeu_pd(out + c * a.stride + p, r);
      }
    }
    for (; i < n; ++i) {
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

double dot_avx2(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= len; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double tail = 0.0;
  for (; k < len; ++k) tail += a[k] * b[k];
  return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < len; ++k) y[k] += alpha * x[k];
}

void xpby_avx2(const double* x, double beta, double* y, std::size_t len) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + k), _mm256_loadu_pd(x + k)));
  }
  for (; k < len; ++k) y[k] = x[k] + beta * y[k];
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{"avx2", laplacian_avx2, helmholtz_avx2, gl_hessian_avx2,
                                 dot_avx2, axpy_avx2,    xpby_avx2};
  return table;
}

}  // namespace glvortex::kernels
