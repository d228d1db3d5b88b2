#include "ttbc/fd/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace ttbc::fd::kernels {

namespace {

// Point updates shared verbatim by the serial and parallel drivers, so both
// execution policies produce identical bits.

inline double line_update(const double* up, const double* uc, int i, double c2) {
  return 2.0 * uc[i] - up[i] + c2 * (uc[i + 1] - 2.0 * uc[i] + uc[i - 1]);
}

inline void rect_row(const double* up, const double* uc, double* un, int i, int ny,
                     double c2) {
  const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(i) * ny;
  for (int j = 0; j < ny; ++j) {
    const int jm = (j == 0) ? ny - 1 : j - 1;
    const int jp = (j == ny - 1) ? 0 : j + 1;
    const std::ptrdiff_t k = base + j;
    un[k] = 2.0 * uc[k] - up[k] +
            c2 * (uc[k - ny] + uc[k + ny] + uc[base + jm] + uc[base + jp] -
                  4.0 * uc[k]);
  }
}

inline void disk_ring(const double* up, const double* uc, double* un, int j,
                      int ntheta, double crp, double crm, double ca) {
  const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(j) * ntheta;
  for (int k = 0; k < ntheta; ++k) {
    const int km = (k == 0) ? ntheta - 1 : k - 1;
    const int kp = (k == ntheta - 1) ? 0 : k + 1;
    const std::ptrdiff_t idx = base + k;
    const double inner = (j > 0) ? uc[idx - ntheta] : 0.0;
    un[idx] = 2.0 * uc[idx] - up[idx] + crp * (uc[idx + ntheta] - uc[idx]) -
              crm * (uc[idx] - inner) +
              ca * (uc[base + kp] - 2.0 * uc[idx] + uc[base + km]);
  }
}

}  // namespace

void leapfrog_line(const double* u_prev, const double* u_curr, double* u_next,
                   int n, double courant2, Exec exec) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 1; i <= n - 2; ++i) {
      u_next[i] = line_update(u_prev, u_curr, i, courant2);
    }
  } else {
    for (int i = 1; i <= n - 2; ++i) {
      u_next[i] = line_update(u_prev, u_curr, i, courant2);
    }
  }
}

void leapfrog_rect(const double* u_prev, const double* u_curr, double* u_next,
                   int nx_nodes, int ny, double courant2, Exec exec) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 1; i <= nx_nodes - 2; ++i) {
      rect_row(u_prev, u_curr, u_next, i, ny, courant2);
    }
  } else {
    for (int i = 1; i <= nx_nodes - 2; ++i) {
      rect_row(u_prev, u_curr, u_next, i, ny, courant2);
    }
  }
}

void leapfrog_disk(const double* u_prev, const double* u_curr, double* u_next,
                   int nr, int ntheta, const double* cr_plus,
                   const double* cr_minus, const double* ca, Exec exec) {
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= nr - 2; ++j) {
      disk_ring(u_prev, u_curr, u_next, j, ntheta, cr_plus[j], cr_minus[j], ca[j]);
    }
  } else {
    for (int j = 0; j <= nr - 2; ++j) {
      disk_ring(u_prev, u_curr, u_next, j, ntheta, cr_plus[j], cr_minus[j], ca[j]);
    }
  }
}

double max_abs(const double* u, std::ptrdiff_t n, Exec exec) {
  double out = 0.0;
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) reduction(max : out)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out = std::max(out, std::abs(u[i]));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out = std::max(out, std::abs(u[i]));
    }
  }
  return out;
}

}  // namespace ttbc::fd::kernels
