#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ttbc/models.hpp"
#include "ttbc/operator.hpp"

namespace ttbc::verify {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// One frozen reference set: model parameters plus the expected operator
/// entries (independent closed-form values shipped with the library).
struct OrthoFixtureSet {
  std::string name;
  models::OrthoCylElastic model;
  TtbcOperator expected;
};

/// Parses a fixture document ({"schema_version", "suite", "sets": [...]}).
/// Throws ConfigError on malformed input.
std::vector<OrthoFixtureSet> parse_ortho_fixture(const nlohmann::json& doc);

/// The fixture shipped in fixtures/ortho_oracle.json, compiled in so the
/// binary verifies itself without external files.
const char* embedded_ortho_fixture();

/// Known suites: "oracle" (pipeline vs closed form vs fixture), "scalar"
/// (curved scalar-wave coefficient grid), "residuals" (seeded random systems,
/// square-root and Sylvester residuals), "biot" (poroelastic half-space
/// checks), or "all". Throws ConfigError for an unknown suite name.
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const std::vector<OrthoFixtureSet>& fixture,
                                   const ToleranceConfig& tol = {});

}  // namespace ttbc::verify
