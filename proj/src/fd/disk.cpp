#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "internal.hpp"
#include "ttbc/fd/kernels.hpp"
#include "ttbc/fd/simulation.hpp"

namespace ttbc::fd {

namespace {

struct DiskGrid {
  int nr = 0;
  int ntheta = 0;
  double hr = 0.0;
  double htheta = 0.0;
  std::vector<double> cr_plus;   // flux coefficients, (c dt)^2 folded in
  std::vector<double> cr_minus;  // cr_minus[0] == 0: no inner face at ring 0
  std::vector<double> ca;
  std::vector<double> r;         // ring radii, r[j] = (j + 1/2) hr
};

// Mixed two-level energy on the polar grid; exactly conserved by the interior
// flux-form leapfrog update.
double disk_energy(const DiskGrid& g, const std::vector<double>& u_new,
                   const std::vector<double>& u_old, double dt, double c,
                   Exec exec) {
  const int nt = g.ntheta;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(g.nr) * nt;
  const double kin = kernels::chunked_sum(n, exec, [&](std::ptrdiff_t i) {
    const double v = (u_new[i] - u_old[i]) / dt;
    return g.r[static_cast<int>(i / nt)] * v * v;
  });
  const std::ptrdiff_t radial_edges = static_cast<std::ptrdiff_t>(g.nr - 1) * nt;
  const double rad = kernels::chunked_sum(radial_edges, exec, [&](std::ptrdiff_t i) {
    const int j = static_cast<int>(i / nt);
    const double w = (j + 1.0) * g.hr * g.htheta / g.hr;  // r_{j+1/2} htheta / hr
    return w * (u_new[i + nt] - u_new[i]) * (u_old[i + nt] - u_old[i]);
  });
  const double ang = kernels::chunked_sum(n, exec, [&](std::ptrdiff_t i) {
    const int j = static_cast<int>(i / nt);
    const int k = static_cast<int>(i % nt);
    const std::ptrdiff_t kp = (k == nt - 1) ? i - (nt - 1) : i + 1;
    const double w = g.hr / (g.r[j] * g.htheta);
    return w * (u_new[kp] - u_new[i]) * (u_old[kp] - u_old[i]);
  });
  return 0.5 * g.hr * g.htheta * kin + 0.5 * c * c * (rad + ang);
}

void check_field(const std::vector<double>& u, int ntheta) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      if (i < static_cast<std::size_t>(2 * ntheta)) {
        throw PoleSingularity("run_2d_disk: non-finite field at the innermost rings");
      }
      throw UnstableRun("run_2d_disk: non-finite field");
    }
  }
}

}  // namespace

DiskResult run_2d_disk(const SimulationConfig& config) {
  const auto* geom = std::get_if<DiskGeometry>(&config.geometry);
  if (!geom) throw ConfigError("run_2d_disk: geometry must be a disk");
  if (geom->nr < 16 || geom->ntheta < 8 || !(geom->radius > 0.0)) {
    throw ConfigError("run_2d_disk: need nr >= 16, ntheta >= 8, radius > 0");
  }
  detail::validate_common(config);

  DiskGrid g;
  g.nr = geom->nr;
  g.ntheta = geom->ntheta;
  g.hr = geom->radius / (geom->nr - 0.5);  // boundary ring lands exactly at R
  g.htheta = 2.0 * std::numbers::pi / geom->ntheta;

  const double c = config.wave_speed;
  const double cfl = detail::resolve_cfl(config.cfl, 0.45);
  const double r0 = 0.5 * g.hr;
  const double dt =
      cfl / (c * std::sqrt(1.0 / (g.hr * g.hr) +
                           1.0 / (r0 * g.htheta * r0 * g.htheta)));
  const double cdt2 = c * c * dt * dt;

  g.cr_plus.resize(g.nr);
  g.cr_minus.resize(g.nr);
  g.ca.resize(g.nr);
  g.r.resize(g.nr);
  for (int j = 0; j < g.nr; ++j) {
    g.r[j] = (j + 0.5) * g.hr;
    g.cr_plus[j] = cdt2 * (j + 1.0) / ((j + 0.5) * g.hr * g.hr);
    g.cr_minus[j] = cdt2 * j / ((j + 0.5) * g.hr * g.hr);
    g.ca[j] = cdt2 / (g.r[j] * g.r[j] * g.htheta * g.htheta);
  }

  const GaussianPulse& pulse = config.pulse;
  if (!(pulse.width > 0.0)) {
    throw ConfigError("run_2d_disk: pulse width must be positive");
  }
  const std::ptrdiff_t field_size = static_cast<std::ptrdiff_t>(g.nr) * g.ntheta;
  std::vector<double> u0(field_size);
  for (int j = 0; j < g.nr; ++j) {
    for (int k = 0; k < g.ntheta; ++k) {
      const double x = g.r[j] * std::cos(k * g.htheta);
      const double y = g.r[j] * std::sin(k * g.htheta);
      const double dx = x - pulse.center_x;
      const double dy = y - pulse.center_y;
      u0[static_cast<std::ptrdiff_t>(j) * g.ntheta + k] =
          pulse.amplitude *
          std::exp(-0.5 * (dx * dx + dy * dy) / (pulse.width * pulse.width));
    }
  }
  // Zero initial velocity: u^1 = u^0 + (c dt)^2/2 * L u^0 on the interior.
  std::vector<double> u1(u0);
  {
    std::vector<double> tmp(field_size, 0.0);
    kernels::leapfrog_disk(u0.data(), u0.data(), tmp.data(), g.nr, g.ntheta,
                           g.cr_plus.data(), g.cr_minus.data(), g.ca.data(),
                           config.exec);
    for (std::ptrdiff_t i = 0; i < field_size - g.ntheta; ++i) {
      u1[i] = 0.5 * (u0[i] + tmp[i]);
    }
  }

  const double duration =
      config.duration > 0.0 ? config.duration : 3.0 * geom->radius / c;
  const int steps = std::max(2, static_cast<int>(std::ceil(duration / dt)));

  const TtbcOperator op = config.op ? *config.op : detail::default_operator(config);

  auto run_once = [&](BoundaryKind kind) {
    const detail::ScalarBoundary bc = detail::scalar_boundary(op, kind);
    std::vector<double> u_old(u0), u_cur(u1), u_next(field_size, 0.0);
    EnergyTrace trace;
    auto sample = [&](int level) {
      trace.times.push_back((level - 0.5) * dt);
      trace.energies.push_back(disk_energy(g, u_cur, u_old, dt, c, config.exec));
    };
    sample(1);
    const double e0 = trace.energies.front();
    const std::ptrdiff_t boundary_row =
        static_cast<std::ptrdiff_t>(g.nr - 1) * g.ntheta;
    for (int m = 1; m < steps; ++m) {
      kernels::leapfrog_disk(u_old.data(), u_cur.data(), u_next.data(), g.nr,
                             g.ntheta, g.cr_plus.data(), g.cr_minus.data(),
                             g.ca.data(), config.exec);
      const double* cur_b = u_cur.data() + boundary_row;
      const double* cur_1 = cur_b - g.ntheta;
      const double* cur_2 = cur_b - 2 * g.ntheta;
      const double* new_1 = u_next.data() + boundary_row - g.ntheta;
      const double* new_2 = u_next.data() + boundary_row - 2 * g.ntheta;
      for (int k = 0; k < g.ntheta; ++k) {
        u_next[boundary_row + k] =
            detail::boundary_advance(bc, cur_b[k], dt, g.hr, cur_1[k], cur_2[k],
                                     new_1[k], new_2[k], 0.0);
      }
      std::swap(u_old, u_cur);
      std::swap(u_cur, u_next);
      if ((m + 1) % config.energy_stride == 0 || m == steps - 1) sample(m + 1);
      if (m % 16 == 0 || m == steps - 1) {
        const double e = trace.energies.back();
        if (!std::isfinite(e)) check_field(u_cur, g.ntheta);
        if (e > 10.0 * e0 + 1e-30) {
          throw UnstableRun("run_2d_disk: discrete energy grew by more than 10x");
        }
      }
    }
    return trace;
  };

  DiskResult result;
  result.with_p0 = run_once(BoundaryKind::Ttbc);
  result.without_p0 = run_once(BoundaryKind::CharacteristicOnly);
  return result;
}

}  // namespace ttbc::fd
