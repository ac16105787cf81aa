#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64 hosts with AVX2+FMA, a vectorized variant; the active table is
// chosen once at startup from the CPU features. Setting GLVORTEX_KERNELS=scalar
// in the environment forces the reference kernels.

#include <cstddef>

namespace glvortex::kernels {

// Operator applied by gl_hessian at interior node p for plane c:
//   out_c = (shift - f_p) in_c - lap(in_c) + coef * u_c * sum_d u_d in_d
// Boundary entries of out are set to zero.
struct GlHessianArgs {
  int n_cells;
  int planes;
  std::size_t stride;  // distance between consecutive planes
  const double* u;
  const double* f;
  double shift;
  double coef;
  double inv_h2;
};

struct KernelTable {
  const char* name;
  // Five-point Laplacian of one plane, interior nodes only; boundary of out untouched.
  void (*laplacian)(const double* in, double* out, int n_cells, double inv_h2);
  // out = shift * in - lap(in) on interior nodes, zero on the boundary.
  void (*helmholtz)(const double* in, double* out, int n_cells, double shift, double inv_h2);
  void (*gl_hessian)(const GlHessianArgs& args, const double* in, double* out);
  double (*dot)(const double* a, const double* b, std::size_t len);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t len);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t len);
};

const KernelTable& scalar_table();
// Null when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_table();
const KernelTable& active();

}  // namespace glvortex::kernels
