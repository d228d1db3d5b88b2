#include "ttbc/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ttbc/errors.hpp"

namespace ttbc::models {

namespace {

void require_positive(double value, const char* name, const char* model) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << model << ": parameter " << name << " must be positive, got " << value;
    throw ConfigError(os.str());
  }
}

}  // namespace

SystemCoefficients build_scalar_wave(const ScalarWave& model) {
  require_positive(model.c, "c", "scalar_wave");
  if (model.dim != 2 && model.dim != 3) {
    throw ConfigError("scalar_wave: dim must be 2 or 3");
  }
  if (model.geometry == Geometry::Circle && model.dim != 2) {
    throw ConfigError("scalar_wave: circle geometry requires dim = 2");
  }
  if (model.geometry == Geometry::Sphere && model.dim != 3) {
    throw ConfigError("scalar_wave: sphere geometry requires dim = 3");
  }
  double curvature = 0.0;
  if (model.geometry != Geometry::Plane) {
    if (!(model.r > 0.0) || !std::isfinite(model.r)) {
      throw MissingRadius("scalar_wave: curved geometry requires a radius r > 0");
    }
    curvature = (model.geometry == Geometry::Sphere ? 2.0 : 1.0) / model.r;
  }
  SystemCoefficients out;
  out.a = Matrix::Constant(1, 1, model.c * model.c);
  out.c0 = Matrix::Constant(1, 1, curvature * model.c * model.c);
  out.tangential_dims = model.dim - 1;
  out.normalize();
  return out;
}

namespace {

void validate_ortho(const OrthoCylElastic& m) {
  require_positive(m.rho, "rho", "ortho_cyl_elastic");
  struct {
    double value;
    const char* name;
  } diag[] = {{m.a11, "a11"}, {m.a22, "a22"}, {m.a33, "a33"},
              {m.a44, "a44"}, {m.a55, "a55"}, {m.a66, "a66"}};
  for (const auto& e : diag) {
    if (!(e.value > 0.0) || !std::isfinite(e.value)) {
      std::ostringstream os;
      os << "ortho_cyl_elastic: stiffness " << e.name << " must be positive, got "
         << e.value;
      throw InvalidStiffness(os.str());
    }
  }
  for (double v : {m.a12, m.a13, m.a23}) {
    if (!std::isfinite(v)) {
      throw InvalidStiffness("ortho_cyl_elastic: off-diagonal stiffness not finite");
    }
  }
  if (m.vti) {
    const double expected = 0.5 * (m.a11 - m.a12);
    if (std::abs(m.a66 - expected) > 1e-12 * std::max(std::abs(m.a11), 1.0)) {
      std::ostringstream os;
      os << "ortho_cyl_elastic: vti requires a66 = (a11 - a12) / 2 = " << expected
         << ", got a66 = " << m.a66;
      throw InvalidStiffness(os.str());
    }
  }
  if (!(m.r > 0.0) || !std::isfinite(m.r)) {
    throw MissingRadius("ortho_cyl_elastic: cylinder radius r must be positive");
  }
}

}  // namespace

SystemCoefficients build_ortho_cyl(const OrthoCylElastic& model) {
  validate_ortho(model);
  const double rho = model.rho;
  const double r = model.r;

  SystemCoefficients out;
  out.a = Matrix::Zero(3, 3);
  out.a.diagonal() << model.a11 / rho, model.a66 / rho, model.a55 / rho;
  out.c0 = out.a / r;
  out.b[0] = Matrix::Zero(3, 3);
  out.b[0](0, 1) = out.b[0](1, 0) = (model.a12 + model.a66) / (rho * r);
  out.b[1] = Matrix::Zero(3, 3);
  out.b[1](0, 2) = out.b[1](2, 0) = (model.a13 + model.a55) / rho;
  out.tangential_dims = 2;
  out.normalize();
  return out;
}

TtbcOperator closed_form_ortho_operator(const OrthoCylElastic& model) {
  validate_ortho(model);
  const double rho = model.rho;
  const double r = model.r;
  const double a11 = model.a11, a66 = model.a66, a55 = model.a55;
  const double s11 = std::sqrt(a11 / rho);
  const double s66 = std::sqrt(a66 / rho);
  const double s55 = std::sqrt(a55 / rho);

  TtbcOperator op;
  op.tangential_dims = 2;
  op.p1 = Matrix::Zero(3, 3);
  op.p1.diagonal() << -1.0 / s11, -1.0 / s66, -1.0 / s55;
  op.p_alg = Matrix::Identity(3, 3) * (-1.0 / (2.0 * r));

  op.q[0] = Matrix::Zero(3, 3);
  op.q[0](0, 1) = -(model.a12 + a66) / ((std::sqrt(a11 * a66) + a11) * r);
  op.q[0](1, 0) = -(model.a12 + a66) / ((std::sqrt(a11 * a66) + a66) * r);
  op.q[1] = Matrix::Zero(3, 3);
  op.q[1](0, 2) = -(model.a13 + a55) / (std::sqrt(a11 * a55) + a11);
  op.q[1](2, 0) = -(model.a13 + a55) / (std::sqrt(a11 * a55) + a55);

  op.resolved_p1 = Matrix::Zero(3, 3);
  op.resolved_p1.diagonal() << -s11, -s66, -s55;
  op.resolved_p_alg = Matrix::Zero(3, 3);
  op.resolved_p_alg.diagonal() << s11 / (2.0 * r), s66 / (2.0 * r), s55 / (2.0 * r);

  const double rq_theta =
      (model.a12 + a66) / ((std::sqrt(a11) + std::sqrt(a66)) * std::sqrt(rho) * r);
  const double rq_z =
      (model.a13 + a55) / ((std::sqrt(a11) + std::sqrt(a55)) * std::sqrt(rho));
  op.resolved_q[0] = Matrix::Zero(3, 3);
  op.resolved_q[0](0, 1) = op.resolved_q[0](1, 0) = rq_theta;
  op.resolved_q[1] = Matrix::Zero(3, 3);
  op.resolved_q[1](0, 2) = op.resolved_q[1](2, 0) = rq_z;
  return op;
}

SystemCoefficients build_biot(const BiotCartesian& model) {
  if (!(model.lambda > 0.0) || !(model.mu > 0.0) || !(model.m_biot > 0.0) ||
      !std::isfinite(model.lambda + model.mu + model.m_biot)) {
    throw InvalidModuli("biot: lambda, mu, and m_biot must be positive");
  }
  if (!(model.alpha >= 0.0) || !std::isfinite(model.alpha)) {
    throw InvalidModuli("biot: alpha must be non-negative");
  }
  if (!(model.rho > 0.0) || !(model.rho_f >= 0.0) ||
      !std::isfinite(model.rho + model.rho_f)) {
    throw InvalidModuli("biot: densities must be positive (rho_f non-negative)");
  }
  if (!(model.m_eff > model.rho_f * model.rho_f / model.rho) ||
      !std::isfinite(model.m_eff)) {
    std::ostringstream os;
    os << "biot: m_eff must exceed rho_f^2 / rho = "
       << model.rho_f * model.rho_f / model.rho << ", got " << model.m_eff;
    throw InvalidModuli(os.str());
  }
  if (model.normal_axis < 1 || model.normal_axis > 3) {
    throw ConfigError("biot: normal_axis must be 1, 2, or 3");
  }

  const int nu = model.normal_axis - 1;
  const int t1 = (nu + 1) % 3;
  const int t2 = (nu + 2) % 3;
  const double lam = model.lambda, mu = model.mu, al = model.alpha;
  const double mm = model.m_biot;
  const double full = lam + mu + al * al * mm;  // lam + mu + alpha^2 M

  SystemCoefficients out;
  out.a = Matrix::Zero(6, 6);
  // Solid-solid block: (lam + mu + alpha^2 M) e_nu e_nu^T + mu I.
  for (int i = 0; i < 3; ++i) out.a(i, i) = mu;
  out.a(nu, nu) += full;
  // Solid-fluid coupling and fluid-fluid block.
  out.a(nu, 3 + nu) = out.a(3 + nu, nu) = -al * mm;
  out.a(3 + nu, 3 + nu) = mm;

  auto mixed_block = [&](int t) {
    Matrix c = Matrix::Zero(6, 6);
    c(nu, t) = c(t, nu) = full;
    c(nu, 3 + t) = c(3 + t, nu) = -al * mm;
    c(t, 3 + nu) = c(3 + nu, t) = -al * mm;
    c(3 + nu, 3 + t) = c(3 + t, 3 + nu) = mm;
    return c;
  };
  out.b[0] = mixed_block(t1);
  out.b[1] = mixed_block(t2);

  Matrix j = Matrix::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    j(i, i) = model.rho;
    j(3 + i, 3 + i) = model.m_eff;
    j(i, 3 + i) = j(3 + i, i) = model.rho_f;
  }
  out.j = j;
  out.tangential_dims = 2;
  out.normalize();
  return out;
}

std::pair<SystemCoefficients, std::vector<int>> reduce_degenerate(
    const SystemCoefficients& coeffs, const ToleranceConfig& tol) {
  HyperbolicityReport report = validate_hyperbolicity(coeffs, tol);
  const std::vector<int>& removed = report.degenerate_indices;
  if (removed.empty()) return {coeffs, {}};

  std::vector<int> keep;
  keep.reserve(coeffs.n);
  for (int i = 0; i < coeffs.n; ++i) {
    if (std::find(removed.begin(), removed.end(), i) == removed.end()) {
      keep.push_back(i);
    }
  }
  if (keep.empty()) {
    // Nothing left to keep: report every component as excluded and hand the
    // system back unchanged; validate_hyperbolicity flags it downstream.
    return {coeffs, removed};
  }

  const int m = static_cast<int>(keep.size());
  auto slice = [&](const Matrix& src) {
    Matrix dst(m, m);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < m; ++k) dst(i, k) = src(keep[i], keep[k]);
    }
    return dst;
  };

  SystemCoefficients out;
  out.a = slice(coeffs.a);
  out.c0 = slice(coeffs.c0);
  out.b[0] = slice(coeffs.b[0]);
  out.b[1] = slice(coeffs.b[1]);
  out.d_tau_a_inv_sqrt[0] = slice(coeffs.d_tau_a_inv_sqrt[0]);
  out.d_tau_a_inv_sqrt[1] = slice(coeffs.d_tau_a_inv_sqrt[1]);
  if (coeffs.j) out.j = slice(*coeffs.j);
  out.tangential_dims = coeffs.tangential_dims;
  out.normalize();
  return {out, removed};
}

SystemCoefficients build(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> SystemCoefficients {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ScalarWave>) return build_scalar_wave(m);
        if constexpr (std::is_same_v<T, OrthoCylElastic>) return build_ortho_cyl(m);
        if constexpr (std::is_same_v<T, BiotCartesian>) return build_biot(m);
      },
      model);
}

}  // namespace ttbc::models
