#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_support.hpp"
#include "ttbc/errors.hpp"
#include "ttbc/linalg.hpp"
#include "ttbc/models.hpp"
#include "ttbc/operator.hpp"

using namespace ttbc;
using test_support::bitwise_equal;
using test_support::max_abs_diff;
using test_support::random_matrix;
using test_support::random_spd;
using test_support::random_symmetric;

namespace {

SystemCoefficients scalar_system(double a, double b1, double b2, double c0,
                                 double d1, double d2) {
  SystemCoefficients sys;
  sys.a = Matrix::Constant(1, 1, a);
  sys.b[0] = Matrix::Constant(1, 1, b1);
  sys.b[1] = Matrix::Constant(1, 1, b2);
  sys.c0 = Matrix::Constant(1, 1, c0);
  sys.d_tau_a_inv_sqrt[0] = Matrix::Constant(1, 1, d1);
  sys.d_tau_a_inv_sqrt[1] = Matrix::Constant(1, 1, d2);
  sys.tangential_dims = 2;
  sys.normalize();
  return sys;
}

/// Randomly populated hyperbolic system, optionally with a mass matrix and
/// stored tangential-derivative blocks.
SystemCoefficients random_system(std::mt19937& rng, int n, bool with_j,
                                 bool with_d) {
  SystemCoefficients sys;
  sys.a = random_spd(rng, n, 1e3);
  sys.b[0] = random_matrix(rng, n);
  sys.b[1] = random_matrix(rng, n);
  sys.c0 = random_matrix(rng, n);
  if (with_d) {
    sys.d_tau_a_inv_sqrt[0] = random_symmetric(rng, n, 0.3);
    sys.d_tau_a_inv_sqrt[1] = random_symmetric(rng, n, 0.3);
  }
  if (with_j) sys.j = random_spd(rng, n, 1e2);
  sys.tangential_dims = 2;
  sys.normalize();
  return sys;
}

}  // namespace

TEST_CASE("hyperbolicity report on diagonal examples") {
  SUBCASE("identity is hyperbolic") {
    SystemCoefficients sys;
    sys.a = Matrix::Identity(3, 3);
    sys.normalize();
    auto report = validate_hyperbolicity(sys);
    CHECK(report.ok);
    REQUIRE(report.eigenvalues.size() == 3);
    for (double ev : report.eigenvalues) CHECK(ev == doctest::Approx(1.0));
    CHECK(report.degenerate_indices.empty());
  }
  SUBCASE("diag(4,1,1) sorts its spectrum ascending") {
    SystemCoefficients sys;
    sys.a = Matrix::Zero(3, 3);
    sys.a.diagonal() << 4.0, 1.0, 1.0;
    sys.normalize();
    auto report = validate_hyperbolicity(sys);
    CHECK(report.ok);
    REQUIRE(report.eigenvalues.size() == 3);
    CHECK(report.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(report.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(report.eigenvalues[2] == doctest::Approx(4.0));
  }
  SUBCASE("a zero row and column is degenerate, not hyperbolic") {
    SystemCoefficients sys;
    sys.a = Matrix::Zero(3, 3);
    sys.a.diagonal() << 1.0, 0.0, 1.0;
    sys.normalize();
    auto report = validate_hyperbolicity(sys);
    CHECK_FALSE(report.ok);
    REQUIRE(report.degenerate_indices.size() == 1);
    CHECK(report.degenerate_indices[0] == 1);
  }
  SUBCASE("a negative eigenvalue is reported, not thrown") {
    SystemCoefficients sys;
    sys.a = Matrix::Zero(2, 2);
    sys.a.diagonal() << 1.0, -1.0;
    sys.normalize();
    auto report = validate_hyperbolicity(sys);
    CHECK_FALSE(report.ok);
    CHECK(report.eigenvalues.front() < 0.0);
  }
}

TEST_CASE("derive_p1 on frozen examples") {
  CHECK(max_abs_diff(derive_p1(scalar_system(4, 0, 0, 0, 0, 0)),
                     Matrix::Constant(1, 1, -0.5)) <= 1e-15);

  SystemCoefficients sys;
  sys.a = Matrix::Zero(3, 3);
  sys.a.diagonal() << 4.0, 1.0, 1.0;
  sys.normalize();
  Matrix expected = Matrix::Zero(3, 3);
  expected.diagonal() << -0.5, -1.0, -1.0;
  CHECK(max_abs_diff(derive_p1(sys), expected) <= 1e-14);

  SystemCoefficients eye;
  eye.a = Matrix::Identity(2, 2);
  eye.normalize();
  CHECK(max_abs_diff(derive_p1(eye), -Matrix::Identity(2, 2)) <= 1e-14);
}

TEST_CASE("derive_q on frozen examples") {
  SUBCASE("zero mixed blocks give exactly zero q") {
    std::mt19937 rng(23u);
    SystemCoefficients sys;
    sys.a = random_spd(rng, 4, 50.0);
    sys.normalize();
    auto q = derive_q(sys);
    CHECK(q[0].isZero(0.0));
    CHECK(q[1].isZero(0.0));
  }
  SUBCASE("cylinder off-diagonal entries") {
    models::OrthoCylElastic model;
    model.rho = 1.0;
    model.a11 = 4.0;
    model.a66 = 1.0;
    model.a55 = 1.0;
    model.a12 = 1.0;
    model.a13 = 0.0;
    model.r = 1.0;
    auto q = derive_q(models::build_ortho_cyl(model));
    // -(a12 + a66) / (sqrt(a11 a66) + a11) and the transposed-entry analog.
    CHECK(q[0](0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    CHECK(q[0](1, 0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("derive_p on frozen examples") {
  SUBCASE("zero c0 and derivative blocks give exactly zero p") {
    std::mt19937 rng(29u);
    SystemCoefficients sys;
    sys.a = random_spd(rng, 3, 50.0);
    sys.b[0] = random_matrix(rng, 3);
    sys.normalize();
    auto q = derive_q(sys);
    CHECK(derive_p(sys, q).isZero(0.0));
  }
  SUBCASE("circular scalar boundary gives -1/(2r)") {
    const double c = 2.0, r = 10.0;
    SystemCoefficients sys = scalar_system(c * c, 0, 0, c * c / r, 0, 0);
    auto q = derive_q(sys);
    Matrix p = derive_p(sys, q);
    CHECK(std::abs(p(0, 0) + 1.0 / (2.0 * r)) <= 1e-14);
  }
  SUBCASE("cylinder algebraic part is -1/(2r) on the diagonal") {
    models::OrthoCylElastic model;
    model.a11 = 4.0;
    model.a12 = 1.0;
    model.a13 = 1.0;
    model.r = 2.0;
    SystemCoefficients sys = models::build_ortho_cyl(model);
    auto q = derive_q(sys);
    Matrix p = derive_p(sys, q);
    CHECK(max_abs_diff(p, Matrix::Identity(3, 3) * (-0.25)) <= 1e-12);
  }
}

TEST_CASE("derive_operator end to end on trivial systems") {
  SUBCASE("plane scalar boundary is the characteristic condition") {
    const double c = 3.0;
    TtbcOperator op = derive_operator(scalar_system(c * c, 0, 0, 0, 0, 0));
    CHECK(op.p1(0, 0) == doctest::Approx(-1.0 / c).epsilon(1e-14));
    CHECK(op.p_alg.isZero(0.0));
    CHECK(op.q[0].isZero(0.0));
    // Resolved: u_t = -c u_n, i.e. u_t + c u_n = 0.
    CHECK(op.resolved_p1(0, 0) == doctest::Approx(-c).epsilon(1e-14));
  }
  SUBCASE("spherical scalar boundary reproduces the curvature coefficient") {
    const double c = 2.0, r = 5.0;
    SystemCoefficients sys = scalar_system(c * c, 0, 0, 2.0 * c * c / r, 0, 0);
    TtbcOperator op = derive_operator(sys);
    // u_t + c u_n + (c / r) u = 0 once resolved.
    CHECK(std::abs(op.resolved_p1(0, 0) + c) <= 1e-13);
    CHECK(std::abs(op.resolved_p_alg(0, 0) - c / r) <= 1e-13);
  }
  SUBCASE("identity system") {
    SystemCoefficients sys;
    sys.a = Matrix::Identity(3, 3);
    sys.normalize();
    TtbcOperator op = derive_operator(sys);
    CHECK(max_abs_diff(op.p1, -Matrix::Identity(3, 3)) <= 1e-14);
    CHECK(op.p_alg.isZero(0.0));
    CHECK(op.q[0].isZero(0.0));
    CHECK(op.q[1].isZero(0.0));
    CHECK(max_abs_diff(op.resolved_p1, -Matrix::Identity(3, 3)) <= 1e-13);
  }
}

TEST_CASE("resolved form on frozen examples") {
  TtbcOperator op = derive_operator(scalar_system(4, 0, 0, 0, 0, 0));
  CHECK(op.resolved_p1(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));

  models::OrthoCylElastic model;
  model.a11 = 4.0;
  model.a12 = 1.0;
  model.a13 = 1.0;
  model.r = 1.0;
  TtbcOperator cyl = derive_operator(models::build_ortho_cyl(model));
  CHECK(cyl.resolved_p1(0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
  // (a12 + a66) / (sqrt(a11) + sqrt(a66)) = 2/3 with unit density and radius.
  CHECK(cyl.resolved_q[0](0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("evaluate_symbol composes the operator linearly") {
  TtbcOperator op = derive_operator(scalar_system(4, 0, 0, 0, 0, 0));
  CHECK(evaluate_symbol(op, 0.0, {0.0, 0.0}).isZero(0.0));
  CHECK(evaluate_symbol(op, 1.0, {0.0, 0.0})(0, 0) ==
        doctest::Approx(-0.5).epsilon(1e-14));

  op.q[0] = Matrix::Constant(1, 1, 0.3);
  Matrix sym = evaluate_symbol(op, 1.0, {1.0, 0.0});
  CHECK(sym(0, 0) == doctest::Approx(op.p1(0, 0) + op.p_alg(0, 0) + 0.3)
                         .epsilon(1e-14));
}

TEST_CASE("property: defining residuals of derived operators") {
  std::mt19937 rng(424242u);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 8;
    const bool with_j = t % 3 == 2;
    SystemCoefficients sys = random_system(rng, n, with_j, t % 2 == 1);
    TtbcOperator op = derive_operator(sys);

    // Time-coefficient identity: p1 p1 (j^{-1} a) = I.
    Matrix weighted = sys.j ? Matrix(linalg::inverse(*sys.j) * sys.a) : sys.a;
    CHECK((op.p1 * op.p1 * weighted - Matrix::Identity(n, n)).norm() <=
          1e-9 * std::sqrt(double(n)));
    CHECK((op.resolved_p1 * op.p1 - Matrix::Identity(n, n)).norm() <=
          1e-9 * std::sqrt(double(n)));

    // Sylvester residuals, with the right-hand sides rebuilt from scratch.
    Matrix l = -op.p1;
    Matrix a_inv = linalg::inverse(sys.a);
    Matrix a_inv_root = linalg::spd_inv_sqrt(sys.a);
    Matrix j_root = sys.j ? linalg::spd_sqrt(*sys.j)
                          : Matrix(Matrix::Identity(n, n));
    for (int i = 0; i < 2; ++i) {
      Matrix rhs = -(a_inv * sys.b[i] * a_inv_root);
      if (sys.j) rhs = rhs * j_root;
      const double resid = (l * op.q[i] + op.q[i] * l - rhs).norm();
      CHECK(resid <= 1e-9 * std::max(1.0, rhs.norm()));
    }
    Matrix rhs_p = -(a_inv * sys.c0 * a_inv_root);
    if (sys.j) rhs_p = rhs_p * j_root;
    for (int i = 0; i < 2; ++i) {
      rhs_p -= (a_inv * sys.b[i] + op.q[i]) * sys.d_tau_a_inv_sqrt[i];
    }
    const double resid_p = (l * op.p_alg + op.p_alg * l - rhs_p).norm();
    CHECK(resid_p <= 1e-9 * std::max(1.0, rhs_p.norm()));
  }
}

TEST_CASE("property: resolved form equals the resolved Sylvester solution") {
  // The resolved tangential and algebraic blocks satisfy their own Sylvester
  // equation, obtained by substituting q = p1 * q_resolved into the primal
  // one: L v + v L = -L^{-1} rhs with L = a^{-1/2} and -L^{-1} = resolved_p1.
  std::mt19937 rng(515151u);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 6;
    SystemCoefficients sys = random_system(rng, n, false, t % 2 == 0);
    TtbcOperator op = derive_operator(sys);

    Matrix l = linalg::spd_inv_sqrt(sys.a);
    Matrix a_root = linalg::spd_sqrt(sys.a);
    Matrix a_inv = linalg::inverse(sys.a);

    for (int i = 0; i < 2; ++i) {
      Matrix rhs = -(a_inv * sys.b[i] * l);
      Matrix alt = linalg::solve_sylvester_sym(l, Matrix(-a_root * rhs));
      CHECK((alt - op.resolved_q[i]).norm() <=
            1e-8 * std::max(1.0, op.resolved_q[i].norm()));
    }
    Matrix rhs_p = -(a_inv * sys.c0 * l);
    for (int i = 0; i < 2; ++i) {
      rhs_p -= (a_inv * sys.b[i] + op.q[i]) * sys.d_tau_a_inv_sqrt[i];
    }
    Matrix alt_p = linalg::solve_sylvester_sym(l, Matrix(-a_root * rhs_p));
    CHECK((alt_p - op.resolved_p_alg).norm() <=
          1e-8 * std::max(1.0, op.resolved_p_alg.norm()));
  }
}

TEST_CASE("property: scalar systems reduce to the closed formulas") {
  std::mt19937 rng(616161u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const double a = std::exp(3.0 * uni(rng));
    const double b1 = uni(rng), b2 = uni(rng), c0 = uni(rng);
    const double d1 = 0.3 * uni(rng), d2 = 0.3 * uni(rng);
    TtbcOperator op = derive_operator(scalar_system(a, b1, b2, c0, d1, d2));

    const double root = std::sqrt(a);
    CHECK(std::abs(op.p1(0, 0) + 1.0 / root) <= 1e-12);
    CHECK(std::abs(op.q[0](0, 0) + b1 / (2.0 * a)) <= 1e-12);
    CHECK(std::abs(op.q[1](0, 0) + b2 / (2.0 * a)) <= 1e-12);
    const double p_expected =
        -c0 / (2.0 * a) - (b1 * d1 + b2 * d2) / (4.0 * root);
    CHECK(std::abs(op.p_alg(0, 0) - p_expected) <= 1e-12);
  }
}

TEST_CASE("derivation is deterministic bit for bit") {
  std::mt19937 rng_a(777u), rng_b(777u);
  SystemCoefficients sys_a = random_system(rng_a, 5, true, true);
  SystemCoefficients sys_b = random_system(rng_b, 5, true, true);
  TtbcOperator op_a = derive_operator(sys_a);
  TtbcOperator op_b = derive_operator(sys_b);
  CHECK(bitwise_equal(op_a.p1, op_b.p1));
  CHECK(bitwise_equal(op_a.p_alg, op_b.p_alg));
  CHECK(bitwise_equal(op_a.q[0], op_b.q[0]));
  CHECK(bitwise_equal(op_a.q[1], op_b.q[1]));
  CHECK(bitwise_equal(op_a.resolved_p1, op_b.resolved_p1));
  CHECK(bitwise_equal(op_a.resolved_p_alg, op_b.resolved_p_alg));
  CHECK(bitwise_equal(op_a.resolved_q[0], op_b.resolved_q[0]));
  CHECK(bitwise_equal(op_a.resolved_q[1], op_b.resolved_q[1]));
}

TEST_CASE("non-hyperbolic input fails before derivation") {
  SystemCoefficients sys;
  sys.a = Matrix::Zero(2, 2);
  sys.a.diagonal() << 1.0, -1.0;
  sys.normalize();
  CHECK_THROWS_AS(derive_p1(sys), NotPositiveDefinite);
}
