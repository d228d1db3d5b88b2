#pragma once

// Helpers shared by the finite-difference runners; not installed.

#include <cmath>

#include "ttbc/errors.hpp"
#include "ttbc/fd/simulation.hpp"
#include "ttbc/models.hpp"

namespace ttbc::fd::detail {

/// Scalar resolved boundary coefficients extracted from a (1 x 1) operator:
///   du/dt = p1 * du/dn - p_alg * u - q_tan * du/dtau.
struct ScalarBoundary {
  double p1 = -1.0;
  double p_alg = 0.0;
  double q_tan = 0.0;
};

inline ScalarBoundary scalar_boundary(const TtbcOperator& op, BoundaryKind kind) {
  if (op.size() != 1 || op.resolved_p1.size() != 1) {
    throw ConfigError(
        "simulation: the harness integrates scalar fields; the boundary "
        "operator must be 1 x 1 and resolved");
  }
  ScalarBoundary bc;
  bc.p1 = op.resolved_p1(0, 0);
  if (kind == BoundaryKind::Ttbc) {
    bc.p_alg = op.resolved_p_alg.size() == 1 ? op.resolved_p_alg(0, 0) : 0.0;
    bc.q_tan = op.resolved_q[0].size() == 1 ? op.resolved_q[0](0, 0) : 0.0;
  }
  if (!(bc.p1 < 0.0)) {
    throw ConfigError("simulation: resolved normal coefficient must be negative "
                      "for an outgoing characteristic");
  }
  return bc;
}

/// Trapezoidal advance of the scalar resolved boundary condition with the
/// one-sided second-order outward-normal derivative
///   du/dn = (3 u_b - 4 u_in1 + u_in2) / (2 h).
/// Interior neighbors at the new level are already known; the tangential term
/// stays explicit (evaluated at the old level).
inline double boundary_advance(const ScalarBoundary& bc, double ub_old, double dt,
                               double h, double in1_old, double in2_old,
                               double in1_new, double in2_new,
                               double tangential_old) {
  const double d_old = (3.0 * ub_old - 4.0 * in1_old + in2_old) / (2.0 * h);
  const double d_new_partial = (-4.0 * in1_new + in2_new) / (2.0 * h);
  const double lhs = 1.0 / dt - 0.75 * bc.p1 / h + 0.5 * bc.p_alg;
  const double rhs = ub_old / dt + 0.5 * bc.p1 * (d_new_partial + d_old) -
                     0.5 * bc.p_alg * ub_old - tangential_old;
  return rhs / lhs;
}

inline double resolve_cfl(double requested, double fallback) {
  const double cfl = requested == 0.0 ? fallback : requested;
  if (!(cfl > 0.0) || !(cfl < 1.0)) {
    throw ConfigError("simulation: cfl must lie in (0, 1)");
  }
  return cfl;
}

inline void validate_common(const SimulationConfig& config) {
  if (!(config.wave_speed > 0.0) || !std::isfinite(config.wave_speed)) {
    throw ConfigError("simulation: wave_speed must be positive");
  }
  if (config.energy_stride < 1) {
    throw ConfigError("simulation: energy_stride must be at least 1");
  }
  if (config.duration < 0.0 || config.max_duration < 0.0) {
    throw ConfigError("simulation: durations must be non-negative");
  }
}

/// The default operator for a geometry: plane truncation for the interval and
/// the rectangle, circular truncation for the disk.
inline TtbcOperator default_operator(const SimulationConfig& config) {
  models::ScalarWave model;
  model.c = config.wave_speed;
  if (const auto* disk = std::get_if<DiskGeometry>(&config.geometry)) {
    model.dim = 2;
    model.geometry = models::Geometry::Circle;
    model.r = disk->radius;
  } else {
    model.dim = 2;
    model.geometry = models::Geometry::Plane;
  }
  return derive_operator(models::build_scalar_wave(model));
}

}  // namespace ttbc::fd::detail
