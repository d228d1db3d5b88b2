#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ttbc/types.hpp"

namespace ttbc {

/// Coefficients of a second-order hyperbolic system written in boundary-
/// adapted coordinates, restricted to the blocks that feed the boundary
/// operator: the normal-normal block `a`, the normal-tangential blocks
/// `b[i]`, the first-order normal block `c0`, an optional mass matrix `j`,
/// and stored tangential derivatives of a^{-1/2} for slowly varying media.
///
/// All blocks are n x n. `b`, `c0`, and `d_tau_a_inv_sqrt` default to zero;
/// `j` absent means the identity.
struct SystemCoefficients {
  int n = 0;
  Matrix a;
  std::array<Matrix, 2> b{};
  Matrix c0;
  std::optional<Matrix> j;
  std::array<Matrix, 2> d_tau_a_inv_sqrt{};
  int tangential_dims = 2;

  bool has_mass_matrix() const { return j.has_value(); }

  /// Deduces n from `a` and fills every empty optional block with zeros.
  void normalize();

  /// Structural invariants: square finite blocks of matching size,
  /// tangential_dims in {1, 2}, symmetric j when present. Throws ConfigError
  /// or NotSymmetric.
  void validate(const ToleranceConfig& tol = {}) const;
};

/// Diagnostic outcome of the hyperbolicity check. `eigenvalues` holds the
/// spectrum of a (or j^{-1} a) in ascending order of real part;
/// `degenerate_indices` lists components whose row and column of `a` both
/// vanish relative to ||a||.
struct HyperbolicityReport {
  bool ok = false;
  std::vector<double> eigenvalues;
  std::string message;
  std::vector<int> degenerate_indices;
};

/// Checks that the normal-normal block (weighted by the mass matrix when
/// present) has a strictly positive spectrum. Never throws for merely
/// non-hyperbolic input; structural errors in the coefficients still throw.
HyperbolicityReport validate_hyperbolicity(const SystemCoefficients& coeffs,
                                           const ToleranceConfig& tol = {});

}  // namespace ttbc
