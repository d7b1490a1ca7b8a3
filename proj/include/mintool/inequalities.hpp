#pragma once

#include <utility>
#include <vector>

#include "mintool/energy_density.hpp"
#include "mintool/linalg.hpp"
#include "mintool/reports.hpp"

namespace mintool::ineq {

// Largest safe ellipticity constant for the quadratic form
//   beta a^2 - 2|gamma| ab + alpha b^2 >= delta (a^2 + b^2)
// over all (alpha, beta, gamma) with alpha beta - gamma^2 = 1 and
// alpha + beta <= s, s = max(sqrt(2) k, 2). Requires k >= sqrt(2); the
// returned value is 0.9 of the exact discriminant root and is < 1.
double delta_of_k(double k);

// <DA(X) - DA(Y), X - Y> + C |B(X)-B(Y)| min(|X|,|Y|) |X-Y|
//   - delta_of_k(k) |X-Y|^2.
// Precondition: max(|B(X)|, |B(Y)|) <= k.
double main_inequality_gap(const GradientMatrix& X, const GradientMatrix& Y, double k,
                           double C = 4.0);

// min over sampled pairs in the R-ball of -det(B(X)-B(Y)) / |B(X)-B(Y)|^2.
ConstantEstimate mu_estimate(double R, int n, long samples, std::uint64_t seed);

// <X, YJ> + sum_i det(X_i; Y_i); vanishes identically.
double pair_det_identity(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// det(M1+M2) - det(M1) - det(M2) - <M1, cof^T(M2)>; vanishes identically.
double det_sum_identity(const PlaneMatrix& M1, const PlaneMatrix& M2);

// sum t_ab det((Lambda-Gamma)^{ab}) with t_ab = -1 exactly on the pairs
// coupling row i of the X block with row i of the A block; equals
// <(Lambda_2-Gamma_2) J, Lambda_1-Gamma_1>.
double tab_pairing(const Eigen::MatrixXd& Lambda, const Eigen::MatrixXd& Gamma);

// Constants entering the perturbed inequality, assembled from delta_of_k and
// mu_estimate exactly as the two-constant Young split dictates.
struct RegConstants {
  double R = 1.0;
  double C = 4.0;       // bound for 2|dgamma| + |dalpha| + |dbeta| against |dB|
  double k = 0.0;       // |B| bound on the (3R/2)-ball, 2 (1 + 3R/2)
  double c = 0.0;       // delta_of_k(k)
  double tau = 0.0;     // Young weight: c - 3 C R tau / 4 = c / 2
  double mu = 0.0;      // determinant pinch constant on the (3R/2)-ball
  double lambda = 0.0;  // 3 C R / (4 tau mu)
  double delta = 0.0;   // c / 2
};

RegConstants assemble_reg_constants(double R, double mu);

// <DA(X)-DA(Y), X-Y> - lambda det(B(X)-B(Y)) - delta |X-Y|^2 for one pair;
// preconditions |X|, |Y| <= 3R/2.
double reg_gap(const GradientMatrix& X, const GradientMatrix& Y, const RegConstants& rc);

// Campaign over pairs in B_{3R/2}; min_gap should stay >= -1e-9.
InequalityReport reg_inequality_check(double R, int n, long samples, std::uint64_t seed);

// Same inequality for a general density f (A_f = Df J, B_f = X^T Df J - f J),
// with the lambda of the area constants. min_gap is the empirical c: the
// minimum of the LHS divided by |X-Y|^2.
InequalityReport genf_check(const EnergyDensity& f, double R, int n, long samples,
                            std::uint64_t seed);

// Bisection on eps for the family area - eps |X|^2: largest eps keeping the
// empirical c positive. Returns (eps, c2 distance of that density on B_{2R}).
std::pair<double, double> genf_epsilon_threshold(double R, int n, long samples,
                                                 std::uint64_t seed);

// M(X) = ((beta, -gamma), (-gamma, alpha)); eigenvalue range over samples.
PlaneMatrix m_matrix(const GradientMatrix& X);
std::pair<ConstantEstimate, ConstantEstimate> elliptic_coefficient_bounds(
    const std::vector<GradientMatrix>& samples, double R);

// --- campaign drivers used by the verify suites ---

// Cauchy-Binet + the two determinant identities at relative tolerance 1e-12.
InequalityReport identities_campaign(long samples, std::uint64_t seed);

// tr B = 0, det B = 1, B12 < 0 < B21 at tolerance 1e-10 (min over the three
// signed gaps is reported).
InequalityReport bprops_campaign(long samples, std::uint64_t seed, int max_n = 5,
                                 double maxR = 10.0);

// |A(X)| <= 2|X| and (1+|X|^2)/(2 A(X)) <= |B(X)| <= 2(1+|X|).
InequalityReport basicest_campaign(long samples, std::uint64_t seed, int max_n = 5,
                                   double maxR = 10.0);

// Main inequality with per-pair k = max(|B(X)|, |B(Y)|) and C = 4.
InequalityReport main_campaign(long samples, std::uint64_t seed, int max_n = 3,
                               double maxR = 5.0);

// Positive semidefiniteness of ((beta-delta, -|gamma|), (-|gamma|, alpha-delta)).
InequalityReport poll_form_campaign(long samples, std::uint64_t seed, double k,
                                    int max_n = 3);

}  // namespace mintool::ineq
