#pragma once

#include <stdexcept>
#include <string>

namespace ttbc {

/// Base class for every error this library throws on its own behalf.
struct Error : std::runtime_error {
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Linear-algebra kernel errors.
struct NotSymmetric : Error {
  using Error::Error;
};
struct ConvergenceFailure : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  NotPositiveDefinite(const std::string& what_arg, double eigenvalue)
      : Error(what_arg), offending_eigenvalue(eigenvalue) {}
  double offending_eigenvalue;
};
struct SpectraOverlap : Error {
  using Error::Error;
};
struct NonPositiveSpectrum : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};

// Model-builder errors.
struct MissingRadius : Error {
  using Error::Error;
};
struct InvalidStiffness : Error {
  using Error::Error;
};
struct InvalidModuli : Error {
  using Error::Error;
};

// Finite-difference harness errors.
struct UnstableRun : Error {
  using Error::Error;
};
struct FitFailure : Error {
  using Error::Error;
};
struct PoleSingularity : Error {
  using Error::Error;
};
struct EmptyWindow : Error {
  using Error::Error;
};

/// Malformed configuration: bad JSON shape, unknown keys, out-of-range
/// parameters. The CLI maps this to exit code 1.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace ttbc
