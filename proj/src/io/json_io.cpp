#include "ttbc/io/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "ttbc/errors.hpp"

namespace ttbc::io {

namespace {

void require_object(const json& node, const std::string& ctx) {
  if (!node.is_object()) {
    throw ConfigError(ctx + ": expected a JSON object");
  }
}

void check_keys(const json& obj, const std::string& ctx,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) {
      throw ConfigError("unknown key \"" + it.key() + "\" in " + ctx);
    }
  }
}

const json& require_key(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(ctx + ": missing required key \"" + key + "\"");
  }
  return *it;
}

double as_number(const json& node, const std::string& ctx) {
  if (!node.is_number()) throw ConfigError(ctx + ": expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(ctx + ": value must be finite");
  return v;
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
  return as_number(require_key(obj, key, ctx), ctx + "." + key);
}

double get_number_or(const json& obj, const char* key, double fallback,
                     const std::string& ctx) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, ctx + "." + key);
}

int as_int(const json& node, const std::string& ctx) {
  if (!node.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
  return node.get<int>();
}

int get_int(const json& obj, const char* key, const std::string& ctx) {
  return as_int(require_key(obj, key, ctx), ctx + "." + key);
}

int get_int_or(const json& obj, const char* key, int fallback,
               const std::string& ctx) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, ctx + "." + key);
}

bool get_bool_or(const json& obj, const char* key, bool fallback,
                 const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(ctx + "." + key + ": expected a boolean");
  return it->get<bool>();
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
  const json& node = require_key(obj, key, ctx);
  if (!node.is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
  return node.get<std::string>();
}

std::string get_string_or(const json& obj, const char* key,
                          const std::string& fallback, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
  return it->get<std::string>();
}

void check_schema_version(const json& doc, const std::string& ctx) {
  const int version = get_int(doc, "schema_version", ctx);
  if (version != kSchemaVersion) {
    std::ostringstream os;
    os << ctx << ": unsupported schema_version " << version << " (expected "
       << kSchemaVersion << ")";
    throw ConfigError(os.str());
  }
}

models::ModelSpec parse_model(const json& node) {
  require_object(node, "model");
  const std::string type = get_string(node, "type", "model");
  if (type == "scalar_wave") {
    check_keys(node, "model(scalar_wave)", {"type", "c", "dim", "geometry", "r"});
    models::ScalarWave m;
    m.c = get_number(node, "c", "model");
    m.dim = get_int_or(node, "dim", 2, "model");
    const std::string geom = get_string_or(node, "geometry", "plane", "model");
    if (geom == "plane") {
      m.geometry = models::Geometry::Plane;
    } else if (geom == "circle") {
      m.geometry = models::Geometry::Circle;
    } else if (geom == "sphere") {
      m.geometry = models::Geometry::Sphere;
    } else {
      throw ConfigError("model.geometry: expected plane, circle, or sphere, got \"" +
                        geom + "\"");
    }
    m.r = get_number_or(node, "r", 0.0, "model");
    return m;
  }
  if (type == "ortho_cyl_elastic") {
    check_keys(node, "model(ortho_cyl_elastic)",
               {"type", "rho", "a11", "a12", "a13", "a22", "a23", "a33", "a44",
                "a55", "a66", "r", "vti"});
    models::OrthoCylElastic m;
    m.rho = get_number(node, "rho", "model");
    m.a11 = get_number(node, "a11", "model");
    m.a12 = get_number(node, "a12", "model");
    m.a13 = get_number(node, "a13", "model");
    m.a55 = get_number(node, "a55", "model");
    m.a66 = get_number(node, "a66", "model");
    m.a22 = get_number_or(node, "a22", m.a11, "model");
    m.a23 = get_number_or(node, "a23", m.a13, "model");
    m.a33 = get_number_or(node, "a33", m.a11, "model");
    m.a44 = get_number_or(node, "a44", m.a55, "model");
    m.r = get_number(node, "r", "model");
    m.vti = get_bool_or(node, "vti", false, "model");
    return m;
  }
  if (type == "biot") {
    check_keys(node, "model(biot)",
               {"type", "lambda", "mu", "alpha", "m_biot", "rho", "rho_f", "m_eff",
                "normal_axis"});
    models::BiotCartesian m;
    m.lambda = get_number(node, "lambda", "model");
    m.mu = get_number(node, "mu", "model");
    m.alpha = get_number(node, "alpha", "model");
    m.m_biot = get_number(node, "m_biot", "model");
    m.rho = get_number(node, "rho", "model");
    m.rho_f = get_number(node, "rho_f", "model");
    m.m_eff = get_number(node, "m_eff", "model");
    m.normal_axis = get_int_or(node, "normal_axis", 1, "model");
    return m;
  }
  throw ConfigError("model.type: unknown type \"" + type +
                    "\" (known: scalar_wave, ortho_cyl_elastic, biot)");
}

SystemCoefficients parse_coefficients(const json& node) {
  require_object(node, "coefficients");
  check_keys(node, "coefficients",
             {"n", "a", "b1", "b2", "c0", "j", "d_tau_a_inv_sqrt_1",
              "d_tau_a_inv_sqrt_2", "tangential_dims", "tangential_a",
              "tangential_c"});
  const int n = get_int(node, "n", "coefficients");
  if (n < 1 || n > 12) {
    throw ConfigError("coefficients.n: expected 1 <= n <= 12");
  }
  SystemCoefficients sc;
  sc.a = matrix_from_json(require_key(node, "a", "coefficients"), "coefficients.a",
                          n, n);
  auto optional_block = [&](const char* key) -> Matrix {
    auto it = node.find(key);
    if (it == node.end()) return {};
    return matrix_from_json(*it, std::string("coefficients.") + key, n, n);
  };
  sc.b[0] = optional_block("b1");
  sc.b[1] = optional_block("b2");
  sc.c0 = optional_block("c0");
  sc.d_tau_a_inv_sqrt[0] = optional_block("d_tau_a_inv_sqrt_1");
  sc.d_tau_a_inv_sqrt[1] = optional_block("d_tau_a_inv_sqrt_2");
  if (node.contains("j")) {
    sc.j = matrix_from_json(node["j"], "coefficients.j", n, n);
  }
  // Purely tangential blocks do not enter the boundary operator; they are
  // accepted and shape-checked so full system descriptions round-trip.
  (void)optional_block("tangential_a");
  (void)optional_block("tangential_c");
  sc.tangential_dims = get_int_or(node, "tangential_dims", 2, "coefficients");
  sc.normalize();
  sc.validate();
  return sc;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& node, const std::string& what,
                        Eigen::Index rows, Eigen::Index cols) {
  if (!node.is_array() || node.empty()) {
    throw ConfigError(what + ": expected a non-empty array of rows");
  }
  const Eigen::Index r = static_cast<Eigen::Index>(node.size());
  if (!node[0].is_array() || node[0].empty()) {
    throw ConfigError(what + ": expected rows to be arrays of numbers");
  }
  const Eigen::Index c = static_cast<Eigen::Index>(node[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
    std::ostringstream os;
    os << what << ": expected a " << rows << "x" << cols << " matrix, got " << r
       << "x" << c;
    throw ConfigError(os.str());
  }
  Matrix out(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) {
      throw ConfigError(what + ": rows have inconsistent lengths");
    }
    for (Eigen::Index j = 0; j < c; ++j) {
      out(i, j) = as_number(row[static_cast<std::size_t>(j)], what);
    }
  }
  return out;
}

DeriveRequest parse_derive_request(const json& doc) {
  require_object(doc, "derive config");
  check_keys(doc, "derive config",
             {"schema_version", "model", "coefficients", "tolerance_scale",
              "reduce_degenerate"});
  check_schema_version(doc, "derive config");
  const bool has_model = doc.contains("model");
  const bool has_coeffs = doc.contains("coefficients");
  if (has_model == has_coeffs) {
    throw ConfigError(
        "derive config: provide exactly one of \"model\" and \"coefficients\"");
  }
  DeriveRequest req;
  req.tolerance_scale = get_number_or(doc, "tolerance_scale", 1.0, "derive config");
  if (!(req.tolerance_scale > 0.0)) {
    throw ConfigError("derive config.tolerance_scale: must be positive");
  }
  if (has_model) {
    models::ModelSpec model = parse_model(doc["model"]);
    req.reduce = std::holds_alternative<models::BiotCartesian>(model);
    req.input = std::move(model);
  } else {
    req.input = parse_coefficients(doc["coefficients"]);
  }
  if (doc.contains("reduce_degenerate")) {
    req.reduce = get_bool_or(doc, "reduce_degenerate", req.reduce, "derive config");
  }
  return req;
}

json operator_document_to_json(const OperatorDocument& doc) {
  json op;
  op["p1"] = matrix_to_json(doc.op.p1);
  op["p_alg"] = matrix_to_json(doc.op.p_alg);
  op["q1"] = matrix_to_json(doc.op.q[0]);
  op["q2"] = matrix_to_json(doc.op.q[1]);
  op["resolved_p1"] = matrix_to_json(doc.op.resolved_p1);
  op["resolved_p_alg"] = matrix_to_json(doc.op.resolved_p_alg);
  op["resolved_q1"] = matrix_to_json(doc.op.resolved_q[0]);
  op["resolved_q2"] = matrix_to_json(doc.op.resolved_q[1]);

  json hyperbolicity;
  hyperbolicity["ok"] = doc.report.ok;
  hyperbolicity["eigenvalues"] = doc.report.eigenvalues;
  hyperbolicity["message"] = doc.report.message;
  hyperbolicity["degenerate_indices"] = doc.report.degenerate_indices;

  json out;
  out["schema_version"] = kSchemaVersion;
  out["tool_version"] = doc.tool_version;
  out["input_hash"] = doc.input_hash;
  out["n"] = doc.op.size();
  out["tangential_dims"] = doc.op.tangential_dims;
  out["excluded_indices"] = doc.excluded_indices;
  out["hyperbolicity"] = hyperbolicity;
  out["operator"] = op;
  return out;
}

OperatorDocument operator_document_from_json(const json& doc) {
  require_object(doc, "operator document");
  check_keys(doc, "operator document",
             {"schema_version", "tool_version", "input_hash", "n",
              "tangential_dims", "excluded_indices", "hyperbolicity", "operator"});
  check_schema_version(doc, "operator document");
  OperatorDocument out;
  out.tool_version = get_string(doc, "tool_version", "operator document");
  out.input_hash = get_string(doc, "input_hash", "operator document");
  const int n = get_int(doc, "n", "operator document");
  if (n < 1 || n > 12) {
    throw ConfigError("operator document.n: expected 1 <= n <= 12");
  }

  const json& hyp = require_key(doc, "hyperbolicity", "operator document");
  require_object(hyp, "operator document.hyperbolicity");
  check_keys(hyp, "operator document.hyperbolicity",
             {"ok", "eigenvalues", "message", "degenerate_indices"});
  if (!hyp["ok"].is_boolean()) {
    throw ConfigError("operator document.hyperbolicity.ok: expected a boolean");
  }
  out.report.ok = hyp["ok"].get<bool>();
  out.report.message = get_string(hyp, "message", "operator document.hyperbolicity");
  for (const json& v : require_key(hyp, "eigenvalues", "hyperbolicity")) {
    out.report.eigenvalues.push_back(
        as_number(v, "operator document.hyperbolicity.eigenvalues"));
  }
  for (const json& v : require_key(hyp, "degenerate_indices", "hyperbolicity")) {
    out.report.degenerate_indices.push_back(
        as_int(v, "operator document.hyperbolicity.degenerate_indices"));
  }
  for (const json& v : require_key(doc, "excluded_indices", "operator document")) {
    out.excluded_indices.push_back(
        as_int(v, "operator document.excluded_indices"));
  }

  const json& op = require_key(doc, "operator", "operator document");
  require_object(op, "operator document.operator");
  check_keys(op, "operator document.operator",
             {"p1", "p_alg", "q1", "q2", "resolved_p1", "resolved_p_alg",
              "resolved_q1", "resolved_q2"});
  auto block = [&](const char* key) {
    return matrix_from_json(require_key(op, key, "operator document.operator"),
                            std::string("operator.") + key, n, n);
  };
  out.op.p1 = block("p1");
  out.op.p_alg = block("p_alg");
  out.op.q[0] = block("q1");
  out.op.q[1] = block("q2");
  out.op.resolved_p1 = block("resolved_p1");
  out.op.resolved_p_alg = block("resolved_p_alg");
  out.op.resolved_q[0] = block("resolved_q1");
  out.op.resolved_q[1] = block("resolved_q2");
  out.op.tangential_dims = get_int(doc, "tangential_dims", "operator document");
  if (out.op.tangential_dims != 1 && out.op.tangential_dims != 2) {
    throw ConfigError("operator document.tangential_dims: expected 1 or 2");
  }
  return out;
}

SimulateRequest parse_simulate_request(const json& doc) {
  require_object(doc, "simulate config");
  check_keys(doc, "simulate config", {"schema_version", "simulation"});
  check_schema_version(doc, "simulate config");
  const json& sim = require_key(doc, "simulation", "simulate config");
  require_object(sim, "simulation");
  check_keys(sim, "simulation",
             {"geometry", "length", "cells", "radius", "nr", "ntheta",
              "wave_speed", "cfl", "duration", "max_duration", "boundary",
              "operator_file", "source", "execution", "energy_stride"});

  SimulateRequest req;
  const std::string geometry = get_string(sim, "geometry", "simulation");
  if (geometry == "interval") {
    for (const char* key : {"radius", "nr", "ntheta"}) {
      if (sim.contains(key)) {
        throw ConfigError(std::string("simulation: key \"") + key +
                          "\" does not apply to the interval geometry");
      }
    }
    fd::IntervalGeometry g;
    g.length = get_number_or(sim, "length", 1.0, "simulation");
    g.cells = get_int_or(sim, "cells", 1000, "simulation");
    req.config.geometry = g;
  } else if (geometry == "disk") {
    for (const char* key : {"length", "cells"}) {
      if (sim.contains(key)) {
        throw ConfigError(std::string("simulation: key \"") + key +
                          "\" does not apply to the disk geometry");
      }
    }
    fd::DiskGeometry g;
    g.radius = get_number_or(sim, "radius", 1.0, "simulation");
    g.nr = get_int_or(sim, "nr", 200, "simulation");
    g.ntheta = get_int_or(sim, "ntheta", 64, "simulation");
    req.config.geometry = g;
  } else {
    throw ConfigError("simulation.geometry: expected \"interval\" or \"disk\", got \"" +
                      geometry + "\"");
  }

  req.config.wave_speed = get_number_or(sim, "wave_speed", 1.0, "simulation");
  req.config.cfl = get_number_or(sim, "cfl", 0.0, "simulation");
  req.config.duration = get_number_or(sim, "duration", 0.0, "simulation");
  req.config.max_duration = get_number_or(sim, "max_duration", 0.0, "simulation");
  req.config.energy_stride = get_int_or(sim, "energy_stride", 1, "simulation");

  const std::string boundary = get_string_or(sim, "boundary", "ttbc", "simulation");
  if (boundary == "ttbc") {
    req.config.boundary = fd::BoundaryKind::Ttbc;
  } else if (boundary == "characteristic_only") {
    req.config.boundary = fd::BoundaryKind::CharacteristicOnly;
  } else if (boundary == "dirichlet") {
    req.config.boundary = fd::BoundaryKind::Dirichlet;
  } else {
    throw ConfigError("simulation.boundary: expected ttbc, characteristic_only, "
                      "or dirichlet, got \"" + boundary + "\"");
  }

  const std::string execution =
      get_string_or(sim, "execution", "parallel", "simulation");
  if (execution == "serial") {
    req.config.exec = fd::Exec::Serial;
  } else if (execution == "parallel") {
    req.config.exec = fd::Exec::Parallel;
  } else {
    throw ConfigError("simulation.execution: expected serial or parallel, got \"" +
                      execution + "\"");
  }

  if (sim.contains("source")) {
    const json& source = sim["source"];
    require_object(source, "simulation.source");
    check_keys(source, "simulation.source",
               {"type", "center_x", "center_y", "width", "amplitude", "moving"});
    const std::string type =
        get_string_or(source, "type", "gaussian_pulse", "simulation.source");
    if (type != "gaussian_pulse") {
      throw ConfigError("simulation.source.type: only gaussian_pulse is supported");
    }
    req.config.pulse.center_x =
        get_number_or(source, "center_x", 0.4, "simulation.source");
    req.config.pulse.center_y =
        get_number_or(source, "center_y", 0.0, "simulation.source");
    req.config.pulse.width = get_number_or(source, "width", 0.05, "simulation.source");
    req.config.pulse.amplitude =
        get_number_or(source, "amplitude", 1.0, "simulation.source");
    req.config.pulse.moving =
        get_bool_or(source, "moving", true, "simulation.source");
  }
  if (sim.contains("operator_file")) {
    req.operator_file = get_string(sim, "operator_file", "simulation");
  }
  return req;
}

SweepRequest parse_sweep_request(const json& doc) {
  require_object(doc, "reflection config");
  check_keys(doc, "reflection config", {"schema_version", "reflection"});
  check_schema_version(doc, "reflection config");
  const json& node = require_key(doc, "reflection", "reflection config");
  require_object(node, "reflection");
  check_keys(node, "reflection",
             {"angles_deg", "grid", "wave_speed", "cfl", "wavelength", "cycles",
              "probe_fraction", "max_duration", "execution"});

  SweepRequest req;
  const json& angles = require_key(node, "angles_deg", "reflection");
  if (!angles.is_array()) {
    throw ConfigError("reflection.angles_deg: expected an array of numbers");
  }
  for (const json& v : angles) {
    req.angles_deg.push_back(as_number(v, "reflection.angles_deg"));
  }
  if (req.angles_deg.empty()) {
    throw ConfigError("reflection.angles_deg: empty angle list, nothing to sweep");
  }
  req.grid = get_int_or(node, "grid", 400, "reflection");
  req.wave_speed = get_number_or(node, "wave_speed", 1.0, "reflection");
  req.cfl = get_number_or(node, "cfl", 0.0, "reflection");
  req.wavelength = get_number_or(node, "wavelength", 0.0, "reflection");
  req.cycles = get_number_or(node, "cycles", 2.5, "reflection");
  req.probe_fraction = get_number_or(node, "probe_fraction", 0.35, "reflection");
  req.max_duration = get_number_or(node, "max_duration", 0.0, "reflection");
  const std::string execution = get_string_or(node, "execution", "parallel",
                                              "reflection");
  if (execution == "serial") {
    req.exec = fd::Exec::Serial;
  } else if (execution == "parallel") {
    req.exec = fd::Exec::Parallel;
  } else {
    throw ConfigError("reflection.execution: expected serial or parallel");
  }
  return req;
}

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open \"" + path + "\" for reading");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError("JSON parse error in \"" + path + "\": " + err.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open \"" + path + "\" for writing");
  }
  out << dump_canonical(doc);
  if (!out) {
    throw ConfigError("failed while writing \"" + path + "\"");
  }
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ttbc::io
