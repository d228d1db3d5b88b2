// Throughput comparison of the stencil kernels under both execution
// policies. Reports million lattice-node updates per second and the
// parallel speedup; also cross-checks that the two policies agree bitwise
// on the final field, which is the property the test suite relies on.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
namespace {
int omp_get_max_threads() { return 1; }
}  // namespace
#endif

#include "ttbc/fd/kernels.hpp"

namespace {

using ttbc::fd::Exec;
namespace kernels = ttbc::fd::kernels;

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> u(n);
  for (double& v : u) v = dist(rng);
  return u;
}

struct BenchResult {
  double seconds = 0.0;
  double checksum = 0.0;
};

/// Runs `steps` leapfrog steps with the three-level buffers rotated in
/// place, returning wall time and a checksum of the final field.
template <class StepFn>
BenchResult run_steps(std::vector<double> u_prev, std::vector<double> u_curr,
                      int steps, StepFn&& step) {
  std::vector<double> u_next(u_curr.size(), 0.0);
  const double start = now_s();
  for (int s = 0; s < steps; ++s) {
    step(u_prev.data(), u_curr.data(), u_next.data());
    std::swap(u_prev, u_curr);
    std::swap(u_curr, u_next);
  }
  BenchResult res;
  res.seconds = now_s() - start;
  for (double v : u_curr) res.checksum += v;
  return res;
}

void report(const std::string& name, double nodes_per_step, int steps,
            const BenchResult& serial, const BenchResult& parallel) {
  const double updates = nodes_per_step * steps;
  const double mlups_serial = updates / serial.seconds / 1e6;
  const double mlups_parallel = updates / parallel.seconds / 1e6;
  const bool same = std::memcmp(&serial.checksum, &parallel.checksum,
                                sizeof(double)) == 0;
  std::printf("%-14s %10.1f %12.1f %12.1f %9.2fx   %s\n", name.c_str(),
              nodes_per_step / 1e3, mlups_serial, mlups_parallel,
              serial.seconds / parallel.seconds,
              same ? "bitwise equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int steps = 200;
  if (argc > 1) steps = std::max(1, std::atoi(argv[1]));

  std::printf("threads: %d, steps per kernel: %d\n", omp_get_max_threads(),
              steps);
  std::printf("%-14s %10s %12s %12s %10s\n", "kernel", "knodes", "serial",
              "parallel", "speedup");
  std::printf("%-14s %10s %12s %12s %10s\n", "", "", "MLUP/s", "MLUP/s", "");

  {
    const int n = 1 << 20;
    const auto prev = random_field(n, 11);
    const auto curr = random_field(n, 12);
    const double courant2 = 0.81;
    auto bench = [&](Exec exec) {
      return run_steps(prev, curr, steps,
                       [&](const double* a, const double* b, double* c) {
                         kernels::leapfrog_line(a, b, c, n, courant2, exec);
                         c[0] = 0.0;
                         c[n - 1] = 0.0;
                       });
    };
    report("line", n - 2, steps, bench(Exec::Serial), bench(Exec::Parallel));
  }

  {
    const int nx = 1024, ny = 1024;
    const auto prev = random_field(std::size_t(nx) * ny, 21);
    const auto curr = random_field(std::size_t(nx) * ny, 22);
    const double courant2 = 0.2;
    auto bench = [&](Exec exec) {
      return run_steps(prev, curr, steps,
                       [&](const double* a, const double* b, double* c) {
                         kernels::leapfrog_rect(a, b, c, nx, ny, courant2, exec);
                         for (int j = 0; j < ny; ++j) {
                           c[j] = 0.0;
                           c[std::size_t(nx - 1) * ny + j] = 0.0;
                         }
                       });
    };
    report("rect", double(nx - 2) * ny, steps, bench(Exec::Serial),
           bench(Exec::Parallel));
  }

  {
    const int nr = 1024, ntheta = 1024;
    const auto prev = random_field(std::size_t(nr) * ntheta, 31);
    const auto curr = random_field(std::size_t(nr) * ntheta, 32);
    std::vector<double> cr_plus(nr), cr_minus(nr), ca(nr);
    for (int j = 0; j < nr; ++j) {
      const double r = (j + 0.5) / nr;
      cr_plus[j] = 0.05 * (r + 0.5 / nr) / r;
      cr_minus[j] = j == 0 ? 0.0 : 0.05 * (r - 0.5 / nr) / r;
      ca[j] = 0.05 / (r * r);
    }
    auto bench = [&](Exec exec) {
      return run_steps(prev, curr, steps,
                       [&](const double* a, const double* b, double* c) {
                         kernels::leapfrog_disk(a, b, c, nr, ntheta,
                                                cr_plus.data(), cr_minus.data(),
                                                ca.data(), exec);
                         for (int k = 0; k < ntheta; ++k) {
                           c[std::size_t(nr - 1) * ntheta + k] = 0.0;
                         }
                       });
    };
    report("disk", double(nr - 1) * ntheta, steps, bench(Exec::Serial),
           bench(Exec::Parallel));
  }

  {
    const std::ptrdiff_t n = 1 << 24;
    const auto u = random_field(n, 41);
    auto bench = [&](Exec exec) {
      BenchResult res;
      const double start = now_s();
      for (int s = 0; s < 8; ++s) {
        res.checksum +=
            kernels::chunked_sum(n, exec, [&](std::ptrdiff_t i) {
              return u[i] * u[i];
            });
      }
      res.seconds = now_s() - start;
      return res;
    };
    report("chunked_sum", double(n), 8, bench(Exec::Serial),
           bench(Exec::Parallel));
  }

  return 0;
}
