#pragma once

#include <optional>
#include <vector>

#include "mintool/linalg.hpp"

namespace mintool::area {

// det(X^{ab}) for 1 <= a < b <= n in lexicographic order. Pairs with a = b
// contribute a zero determinant and are omitted; n = 1 yields an empty list.
std::vector<double> subminor_dets(const GradientMatrix& X);

// <X^{ab}, cof^T(Y^{ab})> for the 2x2 row-pair submatrices.
double pair_cof_inner(const GradientMatrix& X, const GradientMatrix& Y, int a, int b);

// A(X) = sqrt(1 + |X|^2 + sum det(X^{ab})^2) >= 1.
double area_density(const GradientMatrix& X);

// DA(X) = (X + sum det(X^{ab}) C_ab(X)) / A(X), cofactor-sum route.
GradientMatrix area_gradient(const GradientMatrix& X);

// Component route: DA_{j1} = alpha x_{j1} - gamma x_{j2},
//                  DA_{j2} = beta  x_{j2} - gamma x_{j1},
// with (alpha, beta, gamma) from b_coeffs. Must agree with area_gradient.
GradientMatrix area_gradient_components(const GradientMatrix& X);

// Exact Hessian of the area density as a (2n)x(2n) matrix acting on
// vec(Y) with index (i, c) -> 2*i + c.
Eigen::MatrixXd area_hessian(const GradientMatrix& X);

// A(X) = DA(X) J.
GradientMatrix field_A(const GradientMatrix& X);

// B(X) = (X^T X J - (1 + |X|^2) J) / A(X).
PlaneMatrix field_B(const GradientMatrix& X);

// Explicit-entry route for B (the same matrix assembled entrywise from
// column norms and the column inner product, divided by A).
PlaneMatrix field_B_entries(const GradientMatrix& X);

// alpha = -B12, beta = B21, gamma = -B11.
BCoefficients b_coeffs(const GradientMatrix& X);

// (X; A(X); B(X)).
LiftedGradient lift(const GradientMatrix& X);

struct DistToCAOptions {
  int starts = 5;           // x-block seed plus random perturbations
  int max_iters = 400;
  double grad_tol = 1e-12;
  std::uint64_t seed = 17;
};

struct DistToCAResult {
  double value = 0.0;       // feasible-point value, an upper bound for the distance
  bool converged = false;
  GradientMatrix argmin;
};

// min over X of |L - lift(X)|_F by multi-start local minimization seeded at
// the x-block of L. Always returns a valid upper bound.
DistToCAResult dist_to_ca(const Eigen::MatrixXd& L, const DistToCAOptions& opts = {});

}  // namespace mintool::area
