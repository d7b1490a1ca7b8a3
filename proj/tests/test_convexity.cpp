#include <doctest.h>

#include <cmath>

#include "mintool/area.hpp"
#include "mintool/convexity.hpp"
#include "mintool/energy_density.hpp"
#include "mintool/rng.hpp"

using namespace mintool;
namespace mc = mintool::cvx;
namespace ma = mintool::area;

namespace {

EnergyDensity half_square() {
  EnergyDensity f;
  f.name = "half-square";
  f.value = [](const GradientMatrix& X) { return 0.5 * X.squaredNorm(); };
  f.gradient = [](const GradientMatrix& X) { return X; };
  f.hessian = [](const GradientMatrix& X) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2 * X.rows(), 2 * X.rows()));
  };
  return f;
}

mc::RankOneDirection dir_e1(int n) {
  mc::RankOneDirection d;
  d.a = Eigen::VectorXd::Zero(n);
  d.a[0] = 1.0;
  d.b = Eigen::Vector2d(1.0, 0.0);
  return d;
}

}  // namespace

TEST_CASE("rank-one directions have a vanishing second singular value") {
  Rng rng(51);
  for (int t = 0; t < 2000; ++t) {
    const int n = 1 + t % 4;
    const auto d = mc::random_rank_one(n, rng);
    const GradientMatrix M = d.matrix();
    CHECK(std::abs(M.norm() - 1.0) <= 1e-12);
    if (n >= 2) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
      CHECK(svd.singularValues()(1) <= 1e-12);
    }
  }
}

TEST_CASE("second variation basics") {
  const EnergyDensity A = area_energy();
  const EnergyDensity q = half_square();
  Rng rng(53);

  // Area at the origin along a unit rank-one line curves with rate 1.
  CHECK(mc::second_variation(A, GradientMatrix::Zero(2, 2), dir_e1(2).matrix()) ==
        doctest::Approx(1.0));

  // A quadratic density has constant curvature 1 along every unit line.
  for (int t = 0; t < 50; ++t) {
    const GradientMatrix X = rng.ball_matrix(2, 5.0);
    const auto d = mc::random_rank_one(2, rng);
    CHECK(mc::second_variation(q, X, d.matrix()) == doctest::Approx(1.0));
  }

  // Closed form vs analytic contraction.
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + t % 4;
    const GradientMatrix X = rng.ball_matrix(n, 8.0);
    const auto d = mc::random_rank_one(n, rng);
    const double closed = mc::second_variation_area_closed(X, d);
    const double contracted = mc::second_variation(A, X, d.matrix());
    CHECK(std::abs(closed - contracted) <= 1e-8 * (1.0 + std::abs(closed)));
    // Lower bound 1 / A(X)^3 from the proof.
    const double a3 = std::pow(ma::area_density(X), 3);
    CHECK(contracted >= 1.0 / a3 - 1e-9);
  }
}

TEST_CASE("second variation falls back to guarded differences") {
  EnergyDensity f = area_energy();
  f.hessian = nullptr;  // force the finite-difference path
  const EnergyDensity A = area_energy();
  Rng rng(57);
  for (int t = 0; t < 20; ++t) {
    const GradientMatrix X = rng.ball_matrix(2, 3.0);
    const auto d = mc::random_rank_one(2, rng);
    const double fd = mc::second_variation(f, X, d.matrix());
    const double an = mc::second_variation(A, X, d.matrix());
    CHECK(std::abs(fd - an) <= 1e-5 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("quadratic shift moves every second variation by exactly 2 eps") {
  const EnergyDensity A = area_energy();
  const double eps = 0.37;
  const EnergyDensity As = quadratic_shift(A, eps);
  Rng rng(59);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 3;
    const GradientMatrix X = rng.ball_matrix(n, 5.0);
    const auto d = mc::random_rank_one(n, rng);
    const GradientMatrix Y = d.matrix();
    const double base = mc::second_variation(A, X, Y);
    const double shifted = mc::second_variation(As, X, Y);
    CHECK(std::abs(shifted - base - 2.0 * eps * Y.squaredNorm()) <= 1e-10);
  }
}

TEST_CASE("area LH gap and its three bracket terms") {
  // Tight at the origin.
  const auto g0 = mc::lh_gap_area(GradientMatrix::Zero(2, 2), dir_e1(2));
  CHECK(g0.value == doctest::Approx(0.0));

  // X aligned with the direction: the Cauchy-Schwarz bracket collapses.
  Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    const auto d = mc::random_rank_one(3, rng);
    const GradientMatrix X = rng.uniform(0.1, 5.0) * d.matrix();
    const auto g = mc::lh_gap_area(X, d);
    CHECK(std::abs(g.term1) <= 1e-9 * (1.0 + X.squaredNorm()));
    CHECK(g.value == doctest::Approx(g.a_term).epsilon(1e-9));
  }

  for (int t = 0; t < 20000; ++t) {
    const int n = 1 + t % 4;
    const GradientMatrix X = rng.ball_matrix(n, 10.0);
    const auto d = mc::random_rank_one(n, rng);
    const auto g = mc::lh_gap_area(X, d);
    CHECK(g.value >= -1e-9);
    CHECK(g.term1 >= -1e-9);
    CHECK(g.term2 >= -1e-9 * (1.0 + X.squaredNorm() * X.squaredNorm()));
    CHECK(g.term3 >= -1e-9 * (1.0 + X.squaredNorm() * X.squaredNorm()));
  }
}

TEST_CASE("tau estimates") {
  // Shrinking region: the constant approaches the origin curvature 1.
  const auto tiny = mc::tau_estimate(1e-3, 2, 2000, 63);
  CHECK(tiny.tau == doctest::Approx(1.0).epsilon(1e-2));

  double prev = std::numeric_limits<double>::infinity();
  for (double R : {0.5, 1.0, 2.0, 5.0}) {
    const auto rep = mc::tau_estimate(R, 2, 5000, 63);
    CHECK(rep.tau > 0.0);
    CHECK(rep.tau <= prev * 1.1);
    prev = rep.tau;

    // Worst witness replays to the reported value.
    const double replay =
        mc::second_variation(area_energy(), rep.worst_X, rep.worst_dir.matrix());
    CHECK(std::abs(replay - rep.tau) <= 1e-9);
  }
}

TEST_CASE("perturbed LH checks") {
  const EnergyDensity A = area_energy();
  const auto base = mc::tau_estimate(1.0, 2, 4000, 67);
  const auto same = mc::perturbed_lh_check(A, 1.0, 2, 4000, 67);
  CHECK(same.tau == doctest::Approx(base.tau));

  const double eps = 0.05;
  const auto up = mc::perturbed_lh_check(quadratic_shift(A, eps), 1.0, 2, 4000, 67);
  CHECK(up.tau == doctest::Approx(base.tau + 2.0 * eps));

  const auto broken = mc::perturbed_lh_check(quadratic_shift(A, -0.6), 1.0, 2, 4000, 67);
  CHECK(broken.tau < 0.0);
}

TEST_CASE("mu rank-one convexity on grids") {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(-2.0 + 0.2 * i);

  const EnergyDensity q = half_square();
  Rng rng(71);
  const auto d = mc::random_rank_one(2, rng);
  CHECK(mc::mu_rank_one_test(q, rng.ball_matrix(2, 2.0), d, 0.5, grid));

  const EnergyDensity A = area_energy();
  const double R = 1.0;
  const double tau = mc::tau_estimate(R, 2, 3000, 73).tau;
  bool all = true;
  for (int t = 0; t < 50; ++t) {
    const GradientMatrix X = rng.ball_matrix(2, 0.2 * R);
    const auto dd = mc::random_rank_one(2, rng);
    std::vector<double> tight;  // stay inside B_R along the line
    for (int i = 0; i <= 10; ++i) tight.push_back(-0.5 + 0.1 * i);
    all = all && mc::mu_rank_one_test(A, X, dd, 0.5 * tau, tight);
  }
  CHECK(all);

  // mu = 10 overstates the convexity; some triple must fail.
  bool found_violation = false;
  for (int t = 0; t < 50 && !found_violation; ++t) {
    const GradientMatrix X = rng.ball_matrix(2, 1.0);
    const auto dd = mc::random_rank_one(2, rng);
    found_violation = !mc::mu_rank_one_test(A, X, dd, 10.0, grid);
  }
  CHECK(found_violation);
}

TEST_CASE("C2 distance to the area") {
  const EnergyDensity A = area_energy();
  CHECK(mc::c2_distance(A, 0.5, 0.25, 2) == doctest::Approx(0.0));

  const double eps = 1e-3;
  CHECK(mc::c2_distance(constant_shift(A, eps), 0.5, 0.25, 2) == doctest::Approx(eps));

  // area + eps |X|^2 on B_1 (R = 1/2): sup = eps (|X|^2 + 2|X| + 2) = 5 eps.
  const double v = mc::c2_distance(quadratic_shift(A, eps), 0.5, 0.2, 2);
  CHECK(v == doctest::Approx(5.0 * eps).epsilon(0.05));
}
