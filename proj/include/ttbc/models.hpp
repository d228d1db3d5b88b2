#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "ttbc/operator.hpp"
#include "ttbc/system.hpp"

namespace ttbc::models {

enum class Geometry { Plane, Circle, Sphere };

/// Acoustic wave equation u_tt = c^2 (Laplacian u) with a planar, circular
/// (dim = 2), or spherical (dim = 3) truncation boundary of radius r.
struct ScalarWave {
  double c = 1.0;
  int dim = 2;
  Geometry geometry = Geometry::Plane;
  double r = 0.0;
};

/// Orthotropic elastic cylinder truncated at radius r, displacement order
/// (radial, azimuthal, axial). The stiffnesses follow two-index contracted
/// notation; a22, a23, a33, a44 do not enter the boundary operator but are
/// validated for completeness. `vti` additionally enforces the transversely
/// isotropic constraint a66 = (a11 - a12) / 2.
struct OrthoCylElastic {
  double rho = 1.0;
  double a11 = 1.0, a12 = 0.0, a13 = 0.0;
  double a22 = 1.0, a23 = 0.0, a33 = 1.0;
  double a44 = 1.0, a55 = 1.0, a66 = 1.0;
  double r = 0.0;
  bool vti = false;
};

/// Isotropic poroelastic half-space in Cartesian coordinates, unknowns
/// (solid displacement u, relative fluid motion w), component order
/// (u1, u2, u3, w1, w2, w3). The truncation plane is normal to
/// `normal_axis` (1, 2, or 3). The inertia coupling requires
/// m_eff > rho_f^2 / rho for a positive-definite mass matrix.
struct BiotCartesian {
  double lambda = 1.0;
  double mu = 1.0;
  double alpha = 1.0;
  double m_biot = 1.0;
  double rho = 1.0;
  double rho_f = 0.5;
  double m_eff = 2.0;
  int normal_axis = 1;
};

using ModelSpec = std::variant<ScalarWave, OrthoCylElastic, BiotCartesian>;

/// n = 1 system: a = [c^2], c0 = [0], [c^2/r], or [2 c^2/r] for plane,
/// circle, sphere. Throws MissingRadius for a curved geometry without r > 0,
/// ConfigError for non-positive c or an inconsistent dim/geometry pair.
SystemCoefficients build_scalar_wave(const ScalarWave& model);

/// n = 3 system on the cylinder r = const:
///   a   = (1/rho)      diag(a11, a66, a55)
///   c0  = (1/(rho r))  diag(a11, a66, a55)
///   b_theta = (1/(rho r)) (a12 + a66) in entries (0,1), (1,0)
///   b_z     = (1/rho)     (a13 + a55) in entries (0,2), (2,0)
/// Throws InvalidStiffness / MissingRadius on bad parameters.
SystemCoefficients build_ortho_cyl(const OrthoCylElastic& model);

/// Closed-form boundary operator for the same model, written directly from
/// the per-entry formulas; serves as the independent cross-check for the
/// derivation pipeline.
TtbcOperator closed_form_ortho_operator(const OrthoCylElastic& model);

/// n = 6 Biot system with mass matrix j = [[rho I, rho_f I], [rho_f I,
/// m_eff I]]. The normal-normal block is singular by construction (tangential
/// relative-fluid components carry no normal stiffness); reduce_degenerate
/// removes them before derivation. Throws InvalidModuli on bad parameters.
SystemCoefficients build_biot(const BiotCartesian& model);

/// Removes every component whose row and column of `a` vanish. Returns the
/// reduced system and the 0-based indices of the removed components (empty
/// when nothing is degenerate). When every component is degenerate the
/// system is returned unchanged with all indices listed; the follow-up
/// validate_hyperbolicity call reports the failure.
std::pair<SystemCoefficients, std::vector<int>> reduce_degenerate(
    const SystemCoefficients& coeffs, const ToleranceConfig& tol = {});

/// Dispatch over the tagged union.
SystemCoefficients build(const ModelSpec& model);

}  // namespace ttbc::models
