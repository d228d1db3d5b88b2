#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttbc/errors.hpp"
#include "ttbc/fd/simulation.hpp"
#include "ttbc/io/json_io.hpp"
#include "ttbc/models.hpp"
#include "ttbc/operator.hpp"
#include "ttbc/system.hpp"
#include "ttbc/verify.hpp"
#include "ttbc/version.hpp"

namespace {

using ttbc::SystemCoefficients;
using ttbc::ToleranceConfig;
namespace io = ttbc::io;
namespace fd = ttbc::fd;
namespace models = ttbc::models;

/// Exit codes: 0 success, 1 malformed input, 2 derivation or simulation
/// failure (non-hyperbolic system, numerics), 3 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitDerivationFailure = 2;
constexpr int kExitVerifyFailure = 3;

double env_tolerance_scale() {
  const char* raw = std::getenv("TTBC_TOLERANCE_SCALE");
  if (!raw || !*raw) return 1.0;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw ttbc::ConfigError(
        "TTBC_TOLERANCE_SCALE must be a positive number, got \"" +
        std::string(raw) + "\"");
  }
  return v;
}

ToleranceConfig make_tolerances(double extra_scale = 1.0) {
  ToleranceConfig tol;
  tol.scale = env_tolerance_scale() * extra_scale;
  return tol;
}

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ttbc::ConfigError("cannot open \"" + path + "\" for writing");
  out << text;
  if (!out) throw ttbc::ConfigError("failed while writing \"" + path + "\"");
}

void print_hyperbolicity_failure(const ttbc::HyperbolicityReport& report) {
  std::cerr << "hyperbolicity check failed: " << report.message << "\n";
  if (!report.eigenvalues.empty()) {
    std::cerr << "  spectrum:";
    for (double v : report.eigenvalues) std::cerr << ' ' << num17(v);
    std::cerr << "\n";
  }
}

int run_derive(const std::string& input_path, const std::string& output_path,
               bool print) {
  const io::json doc = io::load_json_file(input_path);
  const io::DeriveRequest req = io::parse_derive_request(doc);
  const ToleranceConfig tol = make_tolerances(req.tolerance_scale);

  struct Builder {
    SystemCoefficients operator()(const models::ModelSpec& model) const {
      return models::build(model);
    }
    SystemCoefficients operator()(const SystemCoefficients& coeffs) const {
      return coeffs;
    }
  };
  SystemCoefficients coeffs = std::visit(Builder{}, req.input);

  io::OperatorDocument out;
  if (req.reduce) {
    auto [reduced, removed] = models::reduce_degenerate(coeffs, tol);
    coeffs = std::move(reduced);
    out.excluded_indices = std::move(removed);
  }

  out.report = ttbc::validate_hyperbolicity(coeffs, tol);
  if (!out.report.ok) {
    print_hyperbolicity_failure(out.report);
    return kExitDerivationFailure;
  }

  out.op = ttbc::derive_operator(coeffs, tol);
  out.input_hash = io::fnv1a64(io::dump_canonical(doc));
  out.tool_version = ttbc::kVersion;

  const io::json out_json = io::operator_document_to_json(out);
  if (!output_path.empty()) {
    io::write_json_file(output_path, out_json);
    std::cout << "wrote " << output_path << " (n=" << out.op.size()
              << ", input " << out.input_hash << ")\n";
    if (print) std::cout << io::dump_canonical(out_json);
  } else {
    std::cout << io::dump_canonical(out_json);
  }
  return kExitOk;
}

int run_verify(const std::string& suite, const std::string& fixture_path) {
  const ToleranceConfig tol = make_tolerances();
  const io::json fixture_doc =
      fixture_path.empty()
          ? io::json::parse(ttbc::verify::embedded_ortho_fixture())
          : io::load_json_file(fixture_path);
  const auto fixture = ttbc::verify::parse_ortho_fixture(fixture_doc);
  const auto results = ttbc::verify::run_suite(suite, fixture, tol);

  int failures = 0;
  std::string first_failure;
  for (const auto& check : results) {
    std::cout << (check.pass ? "[ PASS ] " : "[ FAIL ] ") << check.name << ": "
              << check.detail << "\n";
    if (!check.pass && failures++ == 0) first_failure = check.name;
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed (suite " << suite << ")\n";
  if (failures > 0) {
    std::cerr << "verification failed: first failing check is \"" << first_failure
              << "\"\n";
    return kExitVerifyFailure;
  }
  return kExitOk;
}

int run_simulate(const std::string& input_path, const std::string& energy_csv,
                 const std::string& summary_path) {
  const io::json doc = io::load_json_file(input_path);
  io::SimulateRequest req = io::parse_simulate_request(doc);

  if (req.operator_file) {
    const io::OperatorDocument opdoc =
        io::operator_document_from_json(io::load_json_file(*req.operator_file));
    if (!opdoc.report.ok) {
      std::cerr << "operator file \"" << *req.operator_file
                << "\" records a failed hyperbolicity check\n";
      return kExitDerivationFailure;
    }
    req.config.op = opdoc.op;
  }

  io::json summary;
  summary["schema_version"] = io::kSchemaVersion;
  summary["tool_version"] = ttbc::kVersion;
  std::ostringstream csv;

  if (std::holds_alternative<fd::IntervalGeometry>(req.config.geometry)) {
    const fd::Run1dResult result = fd::run_1d(req.config);
    csv << "time,energy\n";
    for (std::size_t i = 0; i < result.trace.times.size(); ++i) {
      csv << num17(result.trace.times[i]) << ','
          << num17(result.trace.energies[i]) << '\n';
    }
    summary["geometry"] = "interval";
    summary["incident_amplitude"] = result.report.incident_amplitude;
    summary["residual_amplitude"] = result.report.reflected_amplitude;
    summary["residual_ratio"] = result.report.measured_ratio;
    summary["final_energy"] = result.trace.energies.empty()
                                  ? 0.0
                                  : result.trace.energies.back();
    std::cout << "interval run: residual amplitude ratio = "
              << num17(result.report.measured_ratio) << "\n";
  } else if (std::holds_alternative<fd::DiskGeometry>(req.config.geometry)) {
    const fd::DiskResult result = fd::run_2d_disk(req.config);
    csv << "time,energy_full,energy_characteristic_only\n";
    const std::size_t rows = std::min(result.with_p0.times.size(),
                                      result.without_p0.times.size());
    for (std::size_t i = 0; i < rows; ++i) {
      csv << num17(result.with_p0.times[i]) << ','
          << num17(result.with_p0.energies[i]) << ','
          << num17(result.without_p0.energies[i]) << '\n';
    }
    const double full = result.with_p0.energies.empty()
                            ? 0.0
                            : result.with_p0.energies.back();
    const double characteristic = result.without_p0.energies.empty()
                                      ? 0.0
                                      : result.without_p0.energies.back();
    summary["geometry"] = "disk";
    summary["terminal_energy_full"] = full;
    summary["terminal_energy_characteristic_only"] = characteristic;
    summary["terminal_energy_ratio"] =
        characteristic > 0.0 ? full / characteristic : 0.0;
    std::cout << "disk run: terminal energy " << num17(full)
              << " (full operator) vs " << num17(characteristic)
              << " (characteristic part only)\n";
  } else {
    throw ttbc::ConfigError("simulate: unsupported geometry");
  }

  if (!energy_csv.empty()) {
    write_text_file(energy_csv, csv.str());
    std::cout << "wrote " << energy_csv << "\n";
  }
  if (!summary_path.empty()) {
    io::write_json_file(summary_path, summary);
    std::cout << "wrote " << summary_path << "\n";
  }
  return kExitOk;
}

int run_reflection(const std::string& input_path, const std::string& output_csv) {
  const io::json doc = io::load_json_file(input_path);
  const io::SweepRequest req = io::parse_sweep_request(doc);

  std::ostringstream csv;
  csv << "theta_deg,measured,analytic,rel_error,status\n";
  int succeeded = 0;

  for (double deg : req.angles_deg) {
    fd::SimulationConfig config;
    fd::RectangleGeometry geom;
    geom.lx = geom.ly = 1.0;
    geom.nx = geom.ny = req.grid;
    config.geometry = geom;
    config.wave_speed = req.wave_speed;
    config.cfl = req.cfl;
    config.max_duration = req.max_duration;
    config.exec = req.exec;
    config.plane_wave.theta = deg * std::numbers::pi / 180.0;
    config.plane_wave.cycles = req.cycles;
    config.plane_wave.probe_fraction = req.probe_fraction;
    config.plane_wave.omega =
        req.wavelength > 0.0
            ? 2.0 * std::numbers::pi * req.wave_speed / req.wavelength
            : 0.0;

    try {
      const fd::ReflectionReport report = fd::run_2d_plane_reflection(config);
      csv << num17(deg) << ',' << num17(report.measured_ratio) << ','
          << num17(report.analytic_ratio) << ',' << num17(report.relative_error)
          << ",ok\n";
      std::cout << "theta = " << deg << " deg: measured " << report.measured_ratio
                << ", analytic " << report.analytic_ratio << ", relative error "
                << report.relative_error << "\n";
      ++succeeded;
    } catch (const ttbc::FitFailure& err) {
      std::string reason = err.what();
      std::replace(reason.begin(), reason.end(), ',', ';');
      csv << num17(deg) << ",nan,nan,nan,error: " << reason << "\n";
      std::cerr << "theta = " << deg << " deg: " << err.what() << "\n";
    } catch (const ttbc::UnstableRun& err) {
      std::string reason = err.what();
      std::replace(reason.begin(), reason.end(), ',', ';');
      csv << num17(deg) << ",nan,nan,nan,error: " << reason << "\n";
      std::cerr << "theta = " << deg << " deg: " << err.what() << "\n";
    }
  }

  if (!output_csv.empty()) {
    write_text_file(output_csv, csv.str());
    std::cout << "wrote " << output_csv << "\n";
  } else {
    std::cout << csv.str();
  }
  if (succeeded == 0) {
    std::cerr << "reflection sweep: no angle produced a measurement\n";
    return kExitDerivationFailure;
  }
  return kExitOk;
}

int run_list_models() {
  std::cout <<
      "Known model types for the derive subcommand (\"model\" object):\n"
      "\n"
      "  scalar_wave        acoustic wave equation with a plane, circle, or\n"
      "                     sphere truncation boundary\n"
      "                     keys: c, dim (2|3), geometry, r\n"
      "\n"
      "  ortho_cyl_elastic  orthotropic elastic cylinder truncated at radius r,\n"
      "                     components (radial, azimuthal, axial)\n"
      "                     keys: rho, a11, a12, a13, a22, a23, a33, a44, a55,\n"
      "                           a66, r, vti\n"
      "\n"
      "  biot               isotropic poroelastic half-space with inertial\n"
      "                     coupling (mass matrix); degenerate tangential\n"
      "                     relative-fluid components are removed by default\n"
      "                     keys: lambda, mu, alpha, m_biot, rho, rho_f, m_eff,\n"
      "                           normal_axis\n"
      "\n"
      "Raw systems skip the model layer: pass a \"coefficients\" object with\n"
      "n and the n x n blocks a, b1, b2, c0, j, d_tau_a_inv_sqrt_1/2 instead.\n";
  return kExitOk;
}

int classify_error(const std::exception& err) {
  if (dynamic_cast<const ttbc::ConfigError*>(&err) ||
      dynamic_cast<const ttbc::InvalidStiffness*>(&err) ||
      dynamic_cast<const ttbc::InvalidModuli*>(&err) ||
      dynamic_cast<const ttbc::MissingRadius*>(&err) ||
      dynamic_cast<const ttbc::NotSymmetric*>(&err) ||
      dynamic_cast<const ttbc::EmptyWindow*>(&err)) {
    return kExitBadInput;
  }
  if (dynamic_cast<const ttbc::Error*>(&err)) return kExitDerivationFailure;
  return kExitBadInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local transparent boundary operators for hyperbolic systems: "
               "derivation, verification, and finite-difference demos"};
  app.set_version_flag("--version", std::string(ttbc::kVersion));
  app.require_subcommand(1);

  std::string derive_input, derive_output;
  bool derive_print = false;
  CLI::App* derive = app.add_subcommand(
      "derive", "Derive the boundary operator for a model or raw coefficients");
  derive->add_option("-i,--input", derive_input, "Derivation config (JSON)")
      ->required();
  derive->add_option("-o,--output", derive_output,
                     "Operator document destination (default: stdout)");
  derive->add_flag("--print", derive_print,
                   "Also print the document when --output is set");

  std::string verify_suite = "all", verify_fixture;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run self-checks against frozen reference values");
  verify->add_option("--suite", verify_suite,
                     "oracle, scalar, residuals, biot, or all");
  verify->add_option("--fixture", verify_fixture,
                     "Fixture JSON overriding the embedded reference values");

  std::string sim_input, sim_csv, sim_summary;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a finite-difference demo (interval or disk)");
  simulate->add_option("-i,--input", sim_input, "Simulation config (JSON)")
      ->required();
  simulate->add_option("-o,--output", sim_csv, "Energy history CSV destination");
  simulate->add_option("--summary", sim_summary, "Summary JSON destination");

  std::string refl_input, refl_output;
  CLI::App* reflection = app.add_subcommand(
      "reflection", "Sweep plane-wave incidence angles on the rectangle rig");
  reflection->add_option("-i,--input", refl_input, "Sweep config (JSON)")
      ->required();
  reflection->add_option("-o,--output", refl_output,
                         "CSV destination (default: stdout)");

  CLI::App* list_models =
      app.add_subcommand("list-models", "Describe the built-in model types");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForVersion& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitBadInput;
  }

  try {
    if (derive->parsed()) return run_derive(derive_input, derive_output, derive_print);
    if (verify->parsed()) return run_verify(verify_suite, verify_fixture);
    if (simulate->parsed()) return run_simulate(sim_input, sim_csv, sim_summary);
    if (reflection->parsed()) return run_reflection(refl_input, refl_output);
    if (list_models->parsed()) return run_list_models();
  } catch (const ttbc::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return classify_error(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
