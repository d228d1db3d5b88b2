#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "internal.hpp"
#include "ttbc/fd/kernels.hpp"
#include "ttbc/fd/simulation.hpp"

namespace ttbc::fd {

namespace {

constexpr int kProbeCols = 8;

/// Steady-state measurement plan: a monochromatic plane wave driven on the
/// left face, mode amplitudes extracted on a line of probe columns after the
/// multiply-reflected transient has settled.
struct ModePlan {
  double ky = 0.0;
  double k = 0.0;
  double kx = 0.0;
  double omega = 0.0;
  double period = 0.0;
  std::array<int, kProbeCols> columns{};
  double settle_time = 0.0;
  double dft_length = 0.0;
};

// The transverse wavenumber must fit the periodic box: ky = 2 pi m / Ly.
// m is rounded from the target wavelength and k follows as ky / sin(theta),
// keeping the requested angle exact while the frequency adjusts.
ModePlan plan_modes(double theta, double lambda_target, double ramp_cycles,
                    double c, double lx, double ly, double h, int nx,
                    double probe_fraction, double max_duration) {
  constexpr double pi = std::numbers::pi;
  ModePlan plan;
  if (theta == 0.0) {
    plan.ky = 0.0;
    plan.k = 2.0 * pi / lambda_target;
  } else {
    const double m = std::max(1.0, std::round(ly * std::sin(theta) / lambda_target));
    plan.ky = 2.0 * pi * m / ly;
    plan.k = plan.ky / std::sin(theta);
  }
  if (plan.k * h > 0.7) {
    throw FitFailure("reflection rig: quantized wavelength falls under nine "
                     "points per wavelength on this grid");
  }
  plan.kx = plan.k * std::cos(theta);
  plan.omega = c * plan.k;
  plan.period = 2.0 * pi / plan.omega;

  // Probe columns spaced by ~an eighth of the normal wavelength so the
  // phases 2 kx x_j wrap a full circle and the two modes stay separable.
  const int first = std::clamp(static_cast<int>(std::lround(probe_fraction * nx)),
                               2, nx - 2 - (kProbeCols - 1));
  int spacing = std::max(1, static_cast<int>(std::lround(pi / (4.0 * plan.kx * h))));
  if (first + (kProbeCols - 1) * spacing > nx - 2) {
    spacing = std::max(1, (nx - 2 - first) / (kProbeCols - 1));
  }
  for (int i = 0; i < kProbeCols; ++i) plan.columns[i] = first + i * spacing;

  // Settling: the smooth turn-on plus the first arrival at the far probe and
  // two more full round trips for the reflection series to converge.
  const double cx = c * std::cos(theta);
  const double x_last = plan.columns[kProbeCols - 1] * h;
  plan.settle_time = ramp_cycles * plan.period + (2.0 * lx + x_last) / cx +
                     2.0 * (2.0 * lx) / cx;
  plan.dft_length = 8.0 * plan.period;
  if (plan.settle_time + plan.dft_length > max_duration) {
    throw FitFailure("reflection rig: settling to steady state would exceed "
                     "max_duration");
  }
  return plan;
}

}  // namespace

ReflectionReport run_2d_plane_reflection(const SimulationConfig& config) {
  const auto* geom = std::get_if<RectangleGeometry>(&config.geometry);
  if (!geom) throw ConfigError("run_2d_plane_reflection: geometry must be a rectangle");
  if (geom->nx < 32 || geom->ny < 32 || !(geom->lx > 0.0) || !(geom->ly > 0.0)) {
    throw ConfigError("run_2d_plane_reflection: grid must be at least 32 x 32");
  }
  detail::validate_common(config);
  const double h = geom->lx / geom->nx;
  if (std::abs(geom->ly - geom->ny * h) > 1e-9 * geom->ly) {
    throw ConfigError("run_2d_plane_reflection: cells must be square "
                      "(ly must equal ny * lx / nx)");
  }

  const PlaneWaveSource& src = config.plane_wave;
  const double theta = src.theta;
  if (!(theta >= 0.0) || std::cos(theta) <= 5e-3) {
    throw ConfigError("run_2d_plane_reflection: angle must lie in [0, ~89.7] degrees");
  }
  if (!(src.amplitude > 0.0) || !(src.cycles > 0.0)) {
    throw ConfigError("run_2d_plane_reflection: amplitude and cycles must be positive");
  }
  if (!(src.probe_fraction > 0.05) || !(src.probe_fraction < 0.9)) {
    throw ConfigError("run_2d_plane_reflection: probe_fraction must lie in (0.05, 0.9)");
  }

  const double c = config.wave_speed;
  const double cfl = detail::resolve_cfl(config.cfl, 0.45);
  const double dt = cfl * h / c;
  const double courant2 = cfl * cfl;
  const Exec exec = config.exec;

  const int nxn = geom->nx + 1;
  const int ny = geom->ny;
  const double lambda_target =
      src.omega > 0.0 ? 2.0 * std::numbers::pi * c / src.omega : 0.16 * geom->lx;
  const double max_duration =
      config.max_duration > 0.0 ? config.max_duration : 50.0 * geom->lx / c;

  const ModePlan plan =
      plan_modes(theta, lambda_target, src.cycles, c, geom->lx, geom->ly, h,
                 geom->nx, src.probe_fraction, max_duration);

  const TtbcOperator op = config.op ? *config.op : detail::default_operator(config);
  const bool dirichlet = config.boundary == BoundaryKind::Dirichlet;
  const detail::ScalarBoundary bc =
      dirichlet ? detail::ScalarBoundary{} : detail::scalar_boundary(op, config.boundary);

  const int dft_begin = static_cast<int>(std::ceil(plan.settle_time / dt));
  const int dft_steps = static_cast<int>(std::lround(plan.dft_length / dt));
  const int steps = dft_begin + dft_steps;

  const std::ptrdiff_t field_size = static_cast<std::ptrdiff_t>(nxn) * ny;
  std::vector<double> u_old(field_size, 0.0), u_cur(field_size, 0.0),
      u_next(field_size, 0.0);

  const double ramp_length = src.cycles * plan.period;
  auto drive = [&](double t, std::vector<double>& field) {
    double env = 1.0;
    if (t <= 0.0) {
      env = 0.0;
    } else if (t < ramp_length) {
      const double s = std::sin(0.5 * std::numbers::pi * t / ramp_length);
      env = s * s;
    }
    for (int k = 0; k < ny; ++k) {
      field[k] = src.amplitude * env * std::sin(plan.ky * k * h - plan.omega * t);
    }
  };
  drive(dt, u_cur);

  // Row projection table for exp(-i ky y); the transverse grid spans whole
  // periods, so other transverse modes project to exactly zero.
  std::vector<double> cos_y(ny), sin_y(ny);
  for (int k = 0; k < ny; ++k) {
    cos_y[k] = std::cos(plan.ky * k * h);
    sin_y[k] = std::sin(plan.ky * k * h);
  }

  using Complex = std::complex<double>;
  std::array<Complex, kProbeCols> z{};
  double weight_sum = 0.0;

  const std::ptrdiff_t last_row = static_cast<std::ptrdiff_t>(geom->nx) * ny;
  for (int m = 1; m < steps; ++m) {
    kernels::leapfrog_rect(u_old.data(), u_cur.data(), u_next.data(), nxn, ny,
                           courant2, exec);
    const double t_new = (m + 1) * dt;
    drive(t_new, u_next);
    if (dirichlet) {
      for (int k = 0; k < ny; ++k) u_next[last_row + k] = 0.0;
    } else {
      const double* cur_b = u_cur.data() + last_row;
      const double* cur_1 = cur_b - ny;
      const double* cur_2 = cur_b - 2 * ny;
      const double* new_1 = u_next.data() + last_row - ny;
      const double* new_2 = u_next.data() + last_row - 2 * ny;
      for (int k = 0; k < ny; ++k) {
        const int km = (k == 0) ? ny - 1 : k - 1;
        const int kp = (k == ny - 1) ? 0 : k + 1;
        const double tangential = bc.q_tan * (cur_b[kp] - cur_b[km]) / (2.0 * h);
        u_next[last_row + k] = detail::boundary_advance(
            bc, cur_b[k], dt, h, cur_1[k], cur_2[k], new_1[k], new_2[k], tangential);
      }
    }
    std::swap(u_old, u_cur);
    std::swap(u_cur, u_next);

    const int level = m + 1;
    if (level >= dft_begin && level < dft_begin + dft_steps) {
      const int i_dft = level - dft_begin;
      const double w =
          0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i_dft /
                                std::max(1, dft_steps - 1)));
      const double t = level * dt;
      const Complex e_t(std::cos(plan.omega * t), std::sin(plan.omega * t));
      for (int p = 0; p < kProbeCols; ++p) {
        const double* row =
            u_cur.data() + static_cast<std::ptrdiff_t>(plan.columns[p]) * ny;
        double re = 0.0, im = 0.0;
        for (int k = 0; k < ny; ++k) {
          re += row[k] * cos_y[k];
          im -= row[k] * sin_y[k];
        }
        z[p] += w * Complex(re, im) * e_t;
      }
      weight_sum += w;
    }

    if (m % 64 == 0 || m == steps - 1) {
      const double peak = kernels::max_abs(u_cur.data(), field_size, exec);
      if (!std::isfinite(peak) || peak > 25.0 * src.amplitude) {
        throw UnstableRun("run_2d_plane_reflection: field amplitude blew up");
      }
    }
  }

  // Physical normalization: row projection contributes ny/2, the windowed
  // DFT of the real carrier contributes weight_sum/2.
  const double norm = 0.25 * ny * weight_sum;
  for (auto& v : z) v /= norm;

  // Least-squares split z_j = a e^{i kx x_j} + b e^{-i kx x_j}.
  Complex sum_m(0.0, 0.0), rhs_a(0.0, 0.0), rhs_b(0.0, 0.0);
  std::array<Complex, kProbeCols> e_plus;
  for (int p = 0; p < kProbeCols; ++p) {
    const double phase = plan.kx * plan.columns[p] * h;
    e_plus[p] = Complex(std::cos(phase), std::sin(phase));
    sum_m += Complex(std::cos(2.0 * phase), -std::sin(2.0 * phase));
    rhs_a += std::conj(e_plus[p]) * z[p];
    rhs_b += e_plus[p] * z[p];
  }
  const double n_cols = kProbeCols;
  if (std::abs(sum_m) > 0.6 * n_cols) {
    throw FitFailure("reflection rig: probe spacing cannot separate the "
                     "incident and reflected modes");
  }
  const double det = n_cols * n_cols - std::norm(sum_m);
  const Complex a = (n_cols * rhs_a - sum_m * rhs_b) / det;
  const Complex b = (n_cols * rhs_b - std::conj(sum_m) * rhs_a) / det;

  double signal2 = 0.0, residual2 = 0.0;
  for (int p = 0; p < kProbeCols; ++p) {
    const Complex fit = a * e_plus[p] + b * std::conj(e_plus[p]);
    signal2 += std::norm(z[p]);
    residual2 += std::norm(z[p] - fit);
  }
  if (!(std::abs(a) > 1e-6 * src.amplitude)) {
    throw FitFailure("reflection rig: incident mode not detected at the probe");
  }
  if (residual2 > 0.01 * signal2) {
    throw FitFailure("reflection rig: mode-fit residual exceeds 10% of the "
                     "probe signal");
  }

  ReflectionReport report;
  report.angle = theta;
  report.incident_amplitude = std::abs(a);
  report.reflected_amplitude = std::abs(b);
  report.measured_ratio = std::abs(b) / std::abs(a);
  report.analytic_ratio = (1.0 - std::cos(theta)) / (1.0 + std::cos(theta));
  report.relative_error =
      report.analytic_ratio > 0.0
          ? std::abs(report.measured_ratio - report.analytic_ratio) /
                report.analytic_ratio
          : report.measured_ratio;
  return report;
}

}  // namespace ttbc::fd
