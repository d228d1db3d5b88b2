#pragma once

#include <algorithm>
#include <cstddef>

namespace ttbc::fd {

/// Execution policy of the stencil kernels. Serial is the reference
/// implementation; Parallel distributes rows/rings over OpenMP threads.
/// Both policies compute bitwise identical fields: writes are disjoint and
/// reductions use a fixed chunk decomposition.
enum class Exec { Serial, Parallel };

namespace kernels {

/// One leapfrog step of the 1D interior, nodes 1 .. n-2.
/// courant2 = (c dt / h)^2.
void leapfrog_line(const double* u_prev, const double* u_curr, double* u_next,
                   int n, double courant2, Exec exec);

/// One leapfrog step of the rectangle interior: rows i in [1, nx_nodes-2],
/// every column, periodic in y. Row-major layout, index i * ny + j.
void leapfrog_rect(const double* u_prev, const double* u_curr, double* u_next,
                   int nx_nodes, int ny, double courant2, Exec exec);

/// One leapfrog step of the polar interior: rings j in [0, nr-2], periodic
/// angle; ring nr-1 (the truncation boundary) is written by the caller.
/// The radial operator is in conservative flux form, so ring 0 has no inner
/// neighbor. cr_plus/cr_minus/ca are per-ring coefficients with (c dt)^2
/// already folded in; cr_minus[0] must be 0. Index j * ntheta + k.
void leapfrog_disk(const double* u_prev, const double* u_curr, double* u_next,
                   int nr, int ntheta, const double* cr_plus,
                   const double* cr_minus, const double* ca, Exec exec);

/// max_i |u_i|. Exact under both policies (max is order-independent).
double max_abs(const double* u, std::ptrdiff_t n, Exec exec);

inline constexpr int kSumChunks = 64;

/// Deterministic chunked sum of term(0) + ... + term(n-1): the chunk
/// decomposition and the combine order are fixed, so Serial and Parallel
/// produce the same bits for any thread count.
template <class F>
double chunked_sum(std::ptrdiff_t n, Exec exec, F&& term) {
  double partial[kSumChunks] = {};
  const std::ptrdiff_t stride = (n + kSumChunks - 1) / kSumChunks;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kSumChunks; ++c) {
      const std::ptrdiff_t lo = c * stride;
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, lo + stride);
      double s = 0.0;
      for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
      partial[c] = s;
    }
  } else {
    for (int c = 0; c < kSumChunks; ++c) {
      const std::ptrdiff_t lo = c * stride;
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, lo + stride);
      double s = 0.0;
      for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
      partial[c] = s;
    }
  }
  double total = 0.0;
  for (int c = 0; c < kSumChunks; ++c) total += partial[c];
  return total;
}

}  // namespace kernels
}  // namespace ttbc::fd
