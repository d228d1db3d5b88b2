#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ttbc/fd/simulation.hpp"
#include "ttbc/models.hpp"
#include "ttbc/operator.hpp"
#include "ttbc/system.hpp"

namespace ttbc::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parsing is strict: every object is checked against its allowed key set and
/// an unknown key raises ConfigError naming the key. All parse_* functions
/// throw ConfigError on malformed input.

/// Input to `derive`: either a model or raw coefficient matrices (exactly one
/// of the two). `reduce` requests degenerate-component removal before
/// derivation; it defaults to true for the Biot model and false otherwise.
struct DeriveRequest {
  std::variant<models::ModelSpec, SystemCoefficients> input;
  bool reduce = false;
  double tolerance_scale = 1.0;
};

DeriveRequest parse_derive_request(const json& doc);

/// Serialized derivation result: the operator, the hyperbolicity diagnostics,
/// which component indices were removed, and provenance (tool version plus a
/// hash of the input document).
struct OperatorDocument {
  TtbcOperator op;
  HyperbolicityReport report;
  std::vector<int> excluded_indices;
  std::string input_hash;
  std::string tool_version;
};

json operator_document_to_json(const OperatorDocument& doc);
OperatorDocument operator_document_from_json(const json& doc);

/// Row-major nested-array encoding. matrix_from_json checks the expected
/// shape when rows/cols are non-negative.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& node, const std::string& what,
                        Eigen::Index rows = -1, Eigen::Index cols = -1);

/// Input to `simulate`: geometry plus numerics; the optional operator_file
/// overrides the operator derived from the geometry.
struct SimulateRequest {
  fd::SimulationConfig config;
  std::optional<std::string> operator_file;
};

SimulateRequest parse_simulate_request(const json& doc);

/// Input to `reflection`: the sweep over incidence angles.
struct SweepRequest {
  std::vector<double> angles_deg;
  int grid = 400;
  double wave_speed = 1.0;
  double cfl = 0.0;
  double wavelength = 0.0;  // 0 = default (0.16 * Lx)
  double cycles = 2.5;
  double probe_fraction = 0.35;
  double max_duration = 0.0;
  fd::Exec exec = fd::Exec::Parallel;
};

SweepRequest parse_sweep_request(const json& doc);

/// FNV-1a 64-bit hash of a byte string, formatted "fnv1a64:<16 hex digits>".
std::string fnv1a64(std::string_view bytes);

/// File round-trips. Reading throws ConfigError on a missing file or a JSON
/// syntax error; writing throws ConfigError when the path is not writable.
json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& doc);

/// Canonical text form used for on-disk documents and hashing: two-space
/// indent, sorted keys (nlohmann objects iterate sorted), trailing newline.
/// Doubles round-trip exactly (shortest-representation formatting).
std::string dump_canonical(const json& doc);

}  // namespace ttbc::io
