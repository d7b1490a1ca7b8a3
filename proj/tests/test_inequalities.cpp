#include <doctest.h>

#include <cmath>

#include "mintool/area.hpp"
#include "mintool/energy_density.hpp"
#include "mintool/inequalities.hpp"
#include "mintool/rng.hpp"

using namespace mintool;
namespace mi = mintool::ineq;
namespace ma = mintool::area;

TEST_CASE("delta of k") {
  CHECK(mi::delta_of_k(std::sqrt(2.0)) == doctest::Approx(0.9));
  CHECK_THROWS_AS(mi::delta_of_k(1.0), std::domain_error);
  for (double k : {1.5, 2.0, 5.0, 20.0}) {
    const double d = mi::delta_of_k(k);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
  }
  // With (alpha, beta, gamma) = (1, 1, 0) and delta = 0.9 the shifted form is
  // 0.1 (a^2 + b^2) >= 0.
  const double d = mi::delta_of_k(std::sqrt(2.0));
  CHECK(1.0 - d == doctest::Approx(0.1));
}

TEST_CASE("poll form stays PSD under the constraint") {
  const auto rep = mi::poll_form_campaign(10000, 77, 5.0, 3);
  CHECK_FALSE(rep.violated);
  CHECK(rep.min_gap >= -1e-10);
}

TEST_CASE("main inequality gap") {
  GradientMatrix X(1, 2), Y(1, 2);
  X << 0.0, 0.0;
  Y << 1.0, 0.0;

  SUBCASE("coincident pair gives zero") {
    CHECK(mi::main_inequality_gap(Y, Y, 5.0) == doctest::Approx(0.0));
  }

  SUBCASE("n = 1 pinned pair") {
    const double k = ma::field_B(Y).norm();
    CHECK(k == doctest::Approx(std::sqrt(2.5)));
    const double gap = mi::main_inequality_gap(X, Y, k);
    // First term is 1/sqrt(2), the min-norm factor kills the C-term.
    const double first = 1.0 / std::sqrt(2.0);
    CHECK(gap == doctest::Approx(first - mi::delta_of_k(k)));
    CHECK(gap > 0.0);
  }

  SUBCASE("precondition names the offender") {
    CHECK_THROWS_WITH_AS(mi::main_inequality_gap(X, Y, std::sqrt(2.0)),
                         doctest::Contains("B(Y)"), std::domain_error);
  }

  SUBCASE("campaign has no violations") {
    const auto rep = mi::main_campaign(20000, 7, 3, 5.0);
    CHECK_FALSE(rep.violated);
    CHECK(rep.min_gap >= -1e-9);
  }
}

TEST_CASE("mu estimate") {
  GradientMatrix X(1, 2), Y(1, 2);
  X << 0.0, 0.0;
  Y << 1.0, 0.0;
  const PlaneMatrix dB = ma::field_B(X) - ma::field_B(Y);
  const double ratio = -dB.determinant() / dB.squaredNorm();
  CHECK(ratio == doctest::Approx(std::sqrt(2.0) / 3.0));  // 0.4714...

  const auto est = mi::mu_estimate(1.0, 2, 20000, 11);
  CHECK(est.value > 0.0);

  // Witness replays to the reported value.
  const GradientMatrix WX = gradient_from_json(est.worst_witness["X"]);
  const GradientMatrix WY = gradient_from_json(est.worst_witness["Y"]);
  const PlaneMatrix wB = ma::field_B(WX) - ma::field_B(WY);
  CHECK(std::abs(-wB.determinant() / wB.squaredNorm() - est.value) <= 1e-9);

  // Nested-domain monotonicity of the infimum, up to sampling noise.
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {1.0, 2.0, 5.0, 10.0}) {
    const double v = mi::mu_estimate(R, 2, 20000, 11).value;
    CHECK(v > 0.0);
    CHECK(v <= prev * 1.1);
    prev = v;
  }
}

TEST_CASE("near-diagonal pairs keep the mu ratio bounded") {
  Rng rng(19);
  for (int t = 0; t < 500; ++t) {
    const GradientMatrix X = rng.ball_matrix(2, 1.0);
    GradientMatrix U(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int c = 0; c < 2; ++c) U(i, c) = rng.normal();
    U /= U.norm();
    const GradientMatrix Y = X + 1e-4 * U;
    const PlaneMatrix dB = ma::field_B(X) - ma::field_B(Y);
    if (dB.squaredNorm() < 1e-300) continue;
    CHECK(-dB.determinant() / dB.squaredNorm() > 0.0);
  }
}

TEST_CASE("row-pair determinant identity") {
  GradientMatrix X(1, 2), Y(1, 2);
  X << 1.0, 0.0;
  Y << 0.0, 1.0;
  CHECK(std::abs(mi::pair_det_identity(X, Y)) <= 1e-14);
  CHECK(mi::pair_det_identity(X, X) == doctest::Approx(0.0));

  Rng rng(23);
  for (int t = 0; t < 10000; ++t) {
    const int m = 1 + t % 6;
    const Eigen::MatrixXd A = rng.ball_matrix(m, 10.0);
    const Eigen::MatrixXd B = rng.ball_matrix(m, 10.0);
    CHECK(std::abs(mi::pair_det_identity(A, B)) <= 1e-12 * (1.0 + A.norm() * B.norm()));
  }
  CHECK_THROWS_AS(mi::pair_det_identity(Eigen::MatrixXd::Zero(2, 2),
                                        Eigen::MatrixXd::Zero(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("determinant sum identity") {
  PlaneMatrix I = PlaneMatrix::Identity();
  CHECK(mi::det_sum_identity(I, PlaneMatrix::Zero()) == doctest::Approx(0.0));
  CHECK(mi::det_sum_identity(I, I) == doctest::Approx(0.0));  // 4 = 1 + 1 + 2

  Rng rng(29);
  for (int t = 0; t < 10000; ++t) {
    PlaneMatrix M1, M2;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        M1(r, c) = rng.uniform(-10.0, 10.0);
        M2(r, c) = rng.uniform(-10.0, 10.0);
      }
    CHECK(std::abs(mi::det_sum_identity(M1, M2)) <=
          1e-12 * (1.0 + M1.norm() * M2.norm() + M1.squaredNorm() + M2.squaredNorm()));
  }
}

TEST_CASE("tab pairing against the A-field pairing") {
  GradientMatrix X(1, 2), Y(1, 2);
  X << 0.0, 0.0;
  Y << 1.0, 0.0;
  const Eigen::MatrixXd L = ma::lift(X).stacked();
  const Eigen::MatrixXd G = ma::lift(Y).stacked();
  CHECK(mi::tab_pairing(L, L) == doctest::Approx(0.0));
  CHECK(mi::tab_pairing(L, G) == doctest::Approx(-1.0 / std::sqrt(2.0)));

  Rng rng(31);
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + t % 3;
    const GradientMatrix A = rng.ball_matrix(n, 5.0);
    const GradientMatrix B = rng.ball_matrix(n, 5.0);
    const double tp = mi::tab_pairing(ma::lift(A).stacked(), ma::lift(B).stacked());
    const GradientMatrix D = A - B;
    const double direct =
        (((ma::field_A(A) - ma::field_A(B)) * symplectic_J()).array() * D.array()).sum();
    CHECK(std::abs(tp - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    // Which is minus the gradient pairing.
    const double grad =
        ((ma::area_gradient(A) - ma::area_gradient(B)).array() * D.array()).sum();
    CHECK(std::abs(tp + grad) <= 1e-12 * (1.0 + std::abs(grad)));
  }
  CHECK_THROWS_AS(mi::tab_pairing(Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(6, 2)),
                  std::invalid_argument);
}

TEST_CASE("perturbed regularity inequality") {
  const auto mu = mi::mu_estimate(1.5, 2, 5000, 3);
  const mi::RegConstants rc = mi::assemble_reg_constants(1.0, mu.value);
  GradientMatrix X(2, 2);
  X << 0.3, -0.2, 0.1, 0.4;
  CHECK(mi::reg_gap(X, X, rc) == doctest::Approx(0.0));
  CHECK_THROWS_AS(mi::reg_gap(10.0 * X, X, rc), std::domain_error);

  const auto rep = mi::reg_inequality_check(1.0, 2, 10000, 5);
  CHECK_FALSE(rep.violated);
  CHECK(rep.min_gap >= -1e-9);

  // The lambda-term is pointwise nonnegative: det(dB) <= 0.
  Rng rng(37);
  for (int t = 0; t < 2000; ++t) {
    const GradientMatrix A = rng.ball_matrix(2, 1.5);
    const GradientMatrix B = rng.ball_matrix(2, 1.5);
    CHECK((ma::field_B(A) - ma::field_B(B)).determinant() <= 1e-15);
  }
}

TEST_CASE("general density inequality") {
  const EnergyDensity f = area_energy();
  const auto base = mi::genf_check(f, 1.0, 2, 8000, 9);
  CHECK(base.min_gap > 0.0);

  const auto near = mi::genf_check(quadratic_shift(f, 1e-3), 1.0, 2, 8000, 9);
  CHECK(near.min_gap > 0.0);

  // A far perturbation breaks the inequality; the near-diagonal pairs find it.
  const auto far = mi::genf_check(quadratic_shift(f, -0.6), 1.0, 2, 8000, 9);
  CHECK(far.violated);
  MESSAGE("far-perturbation empirical c: ", far.min_gap);
}

TEST_CASE("elliptic coefficient bounds") {
  std::vector<GradientMatrix> samples;
  samples.push_back(GradientMatrix::Zero(2, 2));
  const auto [c1z, c2z] = mi::elliptic_coefficient_bounds(samples, 0.0);
  CHECK(c1z.value == doctest::Approx(1.0));
  CHECK(c2z.value == doctest::Approx(1.0));

  GradientMatrix E11 = GradientMatrix::Zero(2, 2);
  E11(0, 0) = 1.0;
  const PlaneMatrix M = mi::m_matrix(E11);
  CHECK(M(0, 0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(M(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(M(0, 1) == doctest::Approx(0.0));

  Rng rng(41);
  samples.clear();
  for (int t = 0; t < 5000; ++t) samples.push_back(rng.ball_matrix(2, 5.0));
  const auto [c1, c2] = mi::elliptic_coefficient_bounds(samples, 5.0);
  CHECK(c1.value > 0.0);
  CHECK(c2.value >= c1.value);
  CHECK_THROWS_AS(mi::elliptic_coefficient_bounds({}, 1.0), std::invalid_argument);
}

TEST_CASE("identity and structure campaigns") {
  CHECK_FALSE(mi::identities_campaign(10000, 2024).violated);
  CHECK_FALSE(mi::bprops_campaign(20000, 2025).violated);
  CHECK_FALSE(mi::basicest_campaign(20000, 2026).violated);
}

TEST_CASE("campaigns are seed deterministic") {
  const auto a = mi::main_campaign(5000, 123, 2, 3.0);
  const auto b = mi::main_campaign(5000, 123, 2, 3.0);
  CHECK(a.min_gap == b.min_gap);
  CHECK(a.to_json().dump() == b.to_json().dump());
}
