#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ttbc/errors.hpp"
#include "ttbc/fd/kernels.hpp"
#include "ttbc/fd/simulation.hpp"

using namespace ttbc;

namespace {

std::vector<double> random_field(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

fd::SimulationConfig interval_config(int cells) {
  fd::SimulationConfig cfg;
  fd::IntervalGeometry g;
  g.cells = cells;
  cfg.geometry = g;
  return cfg;
}

fd::SimulationConfig disk_config(int nr, int ntheta, double duration) {
  fd::SimulationConfig cfg;
  fd::DiskGeometry g;
  g.nr = nr;
  g.ntheta = ntheta;
  cfg.geometry = g;
  cfg.duration = duration;
  cfg.pulse.width = 0.06;
  return cfg;
}

fd::SimulationConfig rig_config(int grid, double theta_deg) {
  fd::SimulationConfig cfg;
  fd::RectangleGeometry g;
  g.nx = grid;
  g.ny = grid;
  cfg.geometry = g;
  cfg.plane_wave.theta = theta_deg * M_PI / 180.0;
  return cfg;
}

/// Largest single-step energy increase relative to the initial energy.
double max_step_rise(const fd::EnergyTrace& trace) {
  REQUIRE(trace.energies.size() >= 2);
  const double e0 = trace.energies.front();
  REQUIRE(e0 > 0.0);
  double worst = -1.0;
  for (std::size_t k = 1; k < trace.energies.size(); ++k) {
    worst = std::max(worst, (trace.energies[k] - trace.energies[k - 1]) / e0);
  }
  return worst;
}

/// A legal transparent scalar boundary operator with an extra zeroth-order
/// coefficient injected; gamma > 0 feeds the boundary instead of damping it.
TtbcOperator scalar_op_with_feedback(double gamma) {
  TtbcOperator op;
  op.p1 = Matrix::Constant(1, 1, -1.0);
  op.p_alg = Matrix::Constant(1, 1, gamma);
  op.q[0] = Matrix::Zero(1, 1);
  op.q[1] = Matrix::Zero(1, 1);
  op.resolved_p1 = Matrix::Constant(1, 1, -1.0);
  op.resolved_p_alg = Matrix::Constant(1, 1, -gamma);
  op.resolved_q[0] = Matrix::Zero(1, 1);
  op.resolved_q[1] = Matrix::Zero(1, 1);
  op.tangential_dims = 1;
  return op;
}

}  // namespace

TEST_CASE("window peak-ratio measurement") {
  std::vector<double> probe(200, 0.0);
  for (int i = 20; i < 40; ++i) probe[i] = 1.0 - 0.01 * (i - 30) * (i - 30);
  for (int i = 120; i < 140; ++i) probe[i] = 0.1 * (1.0 - 0.01 * (i - 130) * (i - 130));

  SUBCASE("synthetic echo") {
    const double ratio = fd::measure_reflection(probe, {0, 100}, {100, 200});
    CHECK(ratio == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("silent reflected window gives zero") {
    CHECK(fd::measure_reflection(probe, {0, 100}, {150, 160}) == 0.0);
  }
  SUBCASE("empty or out-of-range windows") {
    CHECK_THROWS_AS(fd::measure_reflection(probe, {10, 10}, {100, 200}),
                    EmptyWindow);
    CHECK_THROWS_AS(fd::measure_reflection(probe, {0, 100}, {190, 210}),
                    EmptyWindow);
    CHECK_THROWS_AS(fd::measure_reflection(probe, {-5, 100}, {100, 200}),
                    EmptyWindow);
  }
  SUBCASE("overlapping windows") {
    CHECK_THROWS_AS(fd::measure_reflection(probe, {0, 110}, {100, 200}), Error);
  }
  SUBCASE("no incident signal") {
    CHECK_THROWS_AS(fd::measure_reflection(probe, {50, 100}, {100, 200}),
                    FitFailure);
  }
}

TEST_CASE("stencil kernels produce identical bits under both policies") {
  std::mt19937_64 rng(777001);

  SUBCASE("line") {
    const int n = 1003;
    auto prev = random_field(rng, n);
    auto curr = random_field(rng, n);
    std::vector<double> a(n, 0.0), b(n, 0.0);
    fd::kernels::leapfrog_line(prev.data(), curr.data(), a.data(), n, 0.81,
                               fd::Exec::Serial);
    fd::kernels::leapfrog_line(prev.data(), curr.data(), b.data(), n, 0.81,
                               fd::Exec::Parallel);
    CHECK(a == b);
    CHECK(a != prev);  // it actually wrote something
  }
  SUBCASE("rectangle") {
    const int nx = 37, ny = 32;
    auto prev = random_field(rng, nx * ny);
    auto curr = random_field(rng, nx * ny);
    std::vector<double> a(prev.size(), 0.0), b(prev.size(), 0.0);
    fd::kernels::leapfrog_rect(prev.data(), curr.data(), a.data(), nx, ny, 0.2,
                               fd::Exec::Serial);
    fd::kernels::leapfrog_rect(prev.data(), curr.data(), b.data(), nx, ny, 0.2,
                               fd::Exec::Parallel);
    CHECK(a == b);
  }
  SUBCASE("disk") {
    const int nr = 20, ntheta = 16;
    auto prev = random_field(rng, nr * ntheta);
    auto curr = random_field(rng, nr * ntheta);
    std::vector<double> cr_plus(nr), cr_minus(nr), ca(nr);
    std::uniform_real_distribution<double> coeff(0.01, 0.2);
    for (int j = 0; j < nr; ++j) {
      cr_plus[j] = coeff(rng);
      cr_minus[j] = coeff(rng);
      ca[j] = coeff(rng);
    }
    cr_minus[0] = 0.0;
    std::vector<double> a(prev.size(), 0.0), b(prev.size(), 0.0);
    fd::kernels::leapfrog_disk(prev.data(), curr.data(), a.data(), nr, ntheta,
                               cr_plus.data(), cr_minus.data(), ca.data(),
                               fd::Exec::Serial);
    fd::kernels::leapfrog_disk(prev.data(), curr.data(), b.data(), nr, ntheta,
                               cr_plus.data(), cr_minus.data(), ca.data(),
                               fd::Exec::Parallel);
    CHECK(a == b);
  }
  SUBCASE("reductions") {
    auto v = random_field(rng, 100003);
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    const double ms = fd::kernels::max_abs(v.data(), n, fd::Exec::Serial);
    const double mp = fd::kernels::max_abs(v.data(), n, fd::Exec::Parallel);
    CHECK(ms == mp);
    double ref = 0.0;
    for (double x : v) ref = std::max(ref, std::abs(x));
    CHECK(ms == ref);
    const double ss = fd::kernels::chunked_sum(
        n, fd::Exec::Serial, [&](std::ptrdiff_t i) { return v[(std::size_t)i]; });
    const double sp = fd::kernels::chunked_sum(
        n, fd::Exec::Parallel, [&](std::ptrdiff_t i) { return v[(std::size_t)i]; });
    CHECK(ss == sp);
    CHECK(std::isfinite(ss));
  }
}

TEST_CASE("interval run lets the pulse leave with tiny residual") {
  fd::Run1dResult res = fd::run_1d(interval_config(1000));
  CHECK(res.report.incident_amplitude == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.report.measured_ratio < 1e-3);
  CHECK(res.report.measured_ratio > 0.0);

  SUBCASE("residual shrinks at second order under refinement") {
    fd::Run1dResult fine = fd::run_1d(interval_config(2000));
    CHECK(fine.report.measured_ratio < res.report.measured_ratio / 3.0);
  }
  SUBCASE("a reflecting wall keeps the full amplitude") {
    fd::SimulationConfig cfg = interval_config(600);
    cfg.boundary = fd::BoundaryKind::Dirichlet;
    const double ratio = fd::run_1d(cfg).report.measured_ratio;
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.05);
  }
}

TEST_CASE("interval run edge cases") {
  SUBCASE("zero initial data stays identically zero") {
    fd::SimulationConfig cfg = interval_config(200);
    cfg.pulse.amplitude = 0.0;
    fd::Run1dResult res = fd::run_1d(cfg);
    REQUIRE_FALSE(res.trace.energies.empty());
    for (double e : res.trace.energies) CHECK(e == 0.0);
    for (double u : res.final_field) CHECK(u == 0.0);
  }
  SUBCASE("repeat runs and both policies give identical bits") {
    fd::SimulationConfig cfg = interval_config(500);
    fd::Run1dResult first = fd::run_1d(cfg);
    fd::Run1dResult second = fd::run_1d(cfg);
    CHECK(first.final_field == second.final_field);
    CHECK(first.trace.energies == second.trace.energies);
    cfg.exec = fd::Exec::Serial;
    fd::Run1dResult serial = fd::run_1d(cfg);
    CHECK(first.final_field == serial.final_field);
    CHECK(first.trace.energies == serial.trace.energies);
  }
  SUBCASE("an energy-feeding boundary coefficient is caught") {
    fd::SimulationConfig cfg = interval_config(200);
    cfg.duration = 3.0;
    cfg.op = scalar_op_with_feedback(50.0);
    CHECK_THROWS_AS(fd::run_1d(cfg), UnstableRun);
    // The characteristic-only mode drops the zeroth-order coefficient, so the
    // same operator runs stably.
    cfg.boundary = fd::BoundaryKind::CharacteristicOnly;
    CHECK_NOTHROW(fd::run_1d(cfg));
  }
  SUBCASE("config validation") {
    CHECK_THROWS_AS(fd::run_1d(interval_config(8)), ConfigError);
    fd::SimulationConfig cfg = interval_config(100);
    cfg.cfl = 1.5;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = interval_config(100);
    cfg.cfl = -0.1;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = interval_config(100);
    cfg.wave_speed = 0.0;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = interval_config(100);
    cfg.pulse.width = 0.0;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = interval_config(100);
    cfg.energy_stride = 0;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = interval_config(100);
    cfg.duration = -1.0;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    cfg = fd::SimulationConfig{};
    cfg.geometry = fd::DiskGeometry{};
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
  }
  SUBCASE("boundary operator validation") {
    fd::SimulationConfig cfg = interval_config(100);
    TtbcOperator op = scalar_op_with_feedback(0.0);
    op.resolved_p1 = Matrix::Constant(1, 1, 1.0);  // wrong characteristic sign
    cfg.op = op;
    CHECK_THROWS_AS(fd::run_1d(cfg), ConfigError);
    fd::SimulationConfig cfg2 = interval_config(100);  // operator of the wrong size
    TtbcOperator big;
    big.p1 = Matrix::Identity(2, 2) * -1.0;
    big.resolved_p1 = big.p1;
    big.p_alg = Matrix::Zero(2, 2);
    big.resolved_p_alg = big.p_alg;
    big.q[0] = big.q[1] = Matrix::Zero(2, 2);
    big.resolved_q[0] = big.resolved_q[1] = Matrix::Zero(2, 2);
    cfg2.op = big;
    CHECK_THROWS_AS(fd::run_1d(cfg2), ConfigError);
  }
}

TEST_CASE("discrete energy stays bounded by its initial value") {
  // Resolved-boundary regime: the trapezoidal boundary update keeps the
  // two-level energy non-increasing to within 1e-10 of E0 per step.
  SUBCASE("disk, per-step") {
    for (auto [nr, nt] : {std::pair{64, 24}, std::pair{128, 48}}) {
      fd::DiskResult res = fd::run_2d_disk(disk_config(nr, nt, 3.0));
      CHECK(max_step_rise(res.with_p0) <= 1e-10);
      CHECK(max_step_rise(res.without_p0) <= 1e-10);
    }
  }
  SUBCASE("interval with a well-resolved boundary layer, per-step") {
    fd::SimulationConfig cfg = interval_config(24000);
    cfg.cfl = 0.45;
    cfg.duration = 0.85;
    cfg.pulse.center_x = 0.65;
    cfg.pulse.width = 0.08;
    fd::Run1dResult res = fd::run_1d(cfg);
    CHECK(max_step_rise(res.trace) <= 1e-10);
  }
  SUBCASE("interval at engineering resolution, global bound and decay") {
    fd::Run1dResult res = fd::run_1d(interval_config(1000));
    const double e0 = res.trace.energies.front();
    REQUIRE(e0 > 0.0);
    const double peak =
        *std::max_element(res.trace.energies.begin(), res.trace.energies.end());
    CHECK(peak <= e0 * (1.0 + 1e-10));
    CHECK(res.trace.energies.back() <= 1e-6 * e0);
  }
}

TEST_CASE("disk runs") {
  SUBCASE("zeroth-order term removes most of the residual energy") {
    fd::DiskResult res = fd::run_2d_disk(disk_config(128, 48, 3.0));
    REQUIRE_FALSE(res.with_p0.energies.empty());
    REQUIRE(res.with_p0.energies.size() == res.without_p0.energies.size());
    CHECK(res.with_p0.energies.back() <= 0.95 * res.without_p0.energies.back());
  }
  SUBCASE("zero initial data stays identically zero") {
    fd::SimulationConfig cfg = disk_config(64, 24, 1.0);
    cfg.pulse.amplitude = 0.0;
    fd::DiskResult res = fd::run_2d_disk(cfg);
    for (double e : res.with_p0.energies) CHECK(e == 0.0);
    for (double e : res.without_p0.energies) CHECK(e == 0.0);
  }
  SUBCASE("boundary treatment is invisible until the wave arrives") {
    fd::SimulationConfig cfg = disk_config(64, 24, 0.5);
    cfg.pulse.center_x = 0.0;  // centered pulse, radius-1 disk: stays interior
    fd::DiskResult res = fd::run_2d_disk(cfg);
    const double e0 = res.with_p0.energies.front();
    REQUIRE(e0 > 0.0);
    REQUIRE(res.with_p0.energies.size() == res.without_p0.energies.size());
    for (std::size_t k = 0; k < res.with_p0.energies.size(); ++k) {
      CHECK(std::abs(res.with_p0.energies[k] - res.without_p0.energies[k]) <=
            1e-12 * e0);
    }
  }
  SUBCASE("repeat runs and both policies give identical bits") {
    fd::SimulationConfig cfg = disk_config(64, 24, 0.8);
    fd::DiskResult first = fd::run_2d_disk(cfg);
    fd::DiskResult second = fd::run_2d_disk(cfg);
    CHECK(first.with_p0.energies == second.with_p0.energies);
    cfg.exec = fd::Exec::Serial;
    fd::DiskResult serial = fd::run_2d_disk(cfg);
    CHECK(first.with_p0.energies == serial.with_p0.energies);
    CHECK(first.without_p0.energies == serial.without_p0.energies);
  }
  SUBCASE("config validation") {
    CHECK_THROWS_AS(fd::run_2d_disk(disk_config(8, 24, 1.0)), ConfigError);
    CHECK_THROWS_AS(fd::run_2d_disk(disk_config(64, 4, 1.0)), ConfigError);
    fd::SimulationConfig cfg = disk_config(64, 24, 1.0);
    cfg.pulse.width = 0.0;
    CHECK_THROWS_AS(fd::run_2d_disk(cfg), ConfigError);
    cfg = fd::SimulationConfig{};  // interval geometry
    CHECK_THROWS_AS(fd::run_2d_disk(cfg), ConfigError);
  }
}

TEST_CASE("oblique-incidence reflection rig") {
  SUBCASE("45 degrees matches the analytic coefficient") {
    fd::ReflectionReport rep = fd::run_2d_plane_reflection(rig_config(128, 45.0));
    CHECK(rep.analytic_ratio ==
          doctest::Approx((1.0 - std::cos(rep.angle)) / (1.0 + std::cos(rep.angle)))
              .epsilon(1e-12));
    CHECK(rep.incident_amplitude > 0.5);
    CHECK(rep.relative_error < 0.15);
  }
  SUBCASE("normal incidence improves under refinement") {
    const double coarse =
        fd::run_2d_plane_reflection(rig_config(64, 0.0)).relative_error;
    const double fine =
        fd::run_2d_plane_reflection(rig_config(128, 0.0)).relative_error;
    CHECK(fine < coarse);
    CHECK(fine < 0.05);
  }
  SUBCASE("a too-short time cap cannot settle") {
    fd::SimulationConfig cfg = rig_config(64, 0.0);
    cfg.max_duration = 1.0;
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), FitFailure);
  }
  SUBCASE("config validation") {
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(rig_config(16, 0.0)), ConfigError);
    fd::SimulationConfig cfg = rig_config(64, 0.0);
    std::get<fd::RectangleGeometry>(cfg.geometry).ny = 32;  // non-square cells
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
    cfg = rig_config(64, 0.0);
    cfg.plane_wave.theta = 1.6;  // past grazing
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
    cfg = rig_config(64, 0.0);
    cfg.plane_wave.theta = -0.1;
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
    cfg = rig_config(64, 0.0);
    cfg.plane_wave.probe_fraction = 0.95;
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
    cfg = rig_config(64, 0.0);
    cfg.plane_wave.amplitude = -1.0;
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
    cfg = fd::SimulationConfig{};  // interval geometry
    CHECK_THROWS_AS(fd::run_2d_plane_reflection(cfg), ConfigError);
  }
}
