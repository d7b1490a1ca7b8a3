#include "mintool/area.hpp"

#include <cmath>

#include "mintool/energy_density.hpp"
#include "mintool/rng.hpp"

namespace mintool::area {

std::vector<double> subminor_dets(const GradientMatrix& X) {
  const int n = static_cast<int>(X.rows());
  std::vector<double> dets;
  dets.reserve(n * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      dets.push_back(X(a, 0) * X(b, 1) - X(a, 1) * X(b, 0));
  return dets;
}

double pair_cof_inner(const GradientMatrix& X, const GradientMatrix& Y, int a, int b) {
  return X(a, 0) * Y(b, 1) - X(a, 1) * Y(b, 0) - X(b, 0) * Y(a, 1) + X(b, 1) * Y(a, 0);
}

double area_density(const GradientMatrix& X) {
  double q = 1.0 + X.squaredNorm();
  for (double d : subminor_dets(X)) q += d * d;
  return std::sqrt(q);
}

GradientMatrix area_gradient(const GradientMatrix& X) {
  const int n = static_cast<int>(X.rows());
  GradientMatrix G = X;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = X(a, 0) * X(b, 1) - X(a, 1) * X(b, 0);
      // C_ab(X): row a and row b carry cof^T of the 2x2 subminor.
      G(a, 0) += d * X(b, 1);
      G(a, 1) -= d * X(b, 0);
      G(b, 0) -= d * X(a, 1);
      G(b, 1) += d * X(a, 0);
    }
  }
  return G / area_density(X);
}

GradientMatrix area_gradient_components(const GradientMatrix& X) {
  const BCoefficients c = b_coeffs(X);
  GradientMatrix G(X.rows(), 2);
  G.col(0) = c.alpha * X.col(0) - c.gamma * X.col(1);
  G.col(1) = c.beta * X.col(1) - c.gamma * X.col(0);
  return G;
}

Eigen::MatrixXd area_hessian(const GradientMatrix& X) {
  const int n = static_cast<int>(X.rows());
  const int N = 2 * n;
  const double A = area_density(X);

  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(N, N);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double d = X(a, 0) * X(b, 1) - X(a, 1) * X(b, 0);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(N);
      c[2 * a + 0] = X(b, 1);
      c[2 * a + 1] = -X(b, 0);
      c[2 * b + 0] = -X(a, 1);
      c[2 * b + 1] = X(a, 0);
      H += c * c.transpose();
      // Hessian of det(X^{ab}) has four +-1 entries.
      H(2 * a + 0, 2 * b + 1) += d;
      H(2 * b + 1, 2 * a + 0) += d;
      H(2 * a + 1, 2 * b + 0) -= d;
      H(2 * b + 0, 2 * a + 1) -= d;
    }
  }
  const Eigen::VectorXd g = vec(area_gradient(X));
  return H / A - g * g.transpose() / A;
}

GradientMatrix field_A(const GradientMatrix& X) { return area_gradient(X) * symplectic_J(); }

PlaneMatrix field_B(const GradientMatrix& X) {
  const PlaneMatrix& J = symplectic_J();
  const PlaneMatrix num = X.transpose() * X * J - (1.0 + X.squaredNorm()) * J;
  return num / area_density(X);
}

PlaneMatrix field_B_entries(const GradientMatrix& X) {
  const double c1 = X.col(0).squaredNorm();
  const double c2 = X.col(1).squaredNorm();
  const double cc = X.col(0).dot(X.col(1));
  PlaneMatrix B;
  B << -cc, -1.0 - c2, 1.0 + c1, cc;
  return B / area_density(X);
}

BCoefficients b_coeffs(const GradientMatrix& X) {
  const double A = area_density(X);
  BCoefficients c;
  c.alpha = (1.0 + X.col(1).squaredNorm()) / A;
  c.beta = (1.0 + X.col(0).squaredNorm()) / A;
  c.gamma = X.col(0).dot(X.col(1)) / A;
  return c;
}

LiftedGradient lift(const GradientMatrix& X) {
  LiftedGradient L;
  L.x_block = X;
  L.a_block = field_A(X);
  L.b_block = field_B(X);
  return L;
}

namespace {

// |lift(X) - L|^2 and its gradient in X. The A-block pulls back through the
// area Hessian, the B-block through the derivative of (X^T X J - (1+|X|^2) J)/A.
double objective(const Eigen::MatrixXd& L, const GradientMatrix& X, GradientMatrix* grad) {
  const int n = static_cast<int>(X.rows());
  const PlaneMatrix& J = symplectic_J();
  const GradientMatrix L1 = L.topRows(n);
  const GradientMatrix L2 = L.middleRows(n, n);
  const PlaneMatrix L3 = L.bottomRows(2);

  const double A = area_density(X);
  const GradientMatrix DA = area_gradient(X);
  const GradientMatrix RA = DA * J - L2;
  const PlaneMatrix B = (X.transpose() * X * J - (1.0 + X.squaredNorm()) * J) / A;
  const PlaneMatrix RB = B - L3;
  const GradientMatrix RX = X - L1;

  const double F = RX.squaredNorm() + RA.squaredNorm() + RB.squaredNorm();
  if (grad) {
    const Eigen::MatrixXd H = area_hessian(X);
    const GradientMatrix MA = RA * J.transpose();
    GradientMatrix g = RX + unvec(H * vec(MA));
    const double jb = (J.transpose() * RB).trace();  // <J, RB>
    const double bb = (B.transpose() * RB).trace();  // <B, RB>
    g += (X * (J * RB.transpose() + RB * J.transpose()) - 2.0 * jb * X) / (2.0 * A);
    g -= (bb / (2.0 * A)) * DA;
    *grad = 2.0 * g;
  }
  return F;
}

struct LocalMin {
  double value;
  bool converged;
  GradientMatrix argmin;
};

LocalMin minimize_from(const Eigen::MatrixXd& L, GradientMatrix X, int max_iters,
                       double grad_tol) {
  GradientMatrix g(X.rows(), 2), g_prev(X.rows(), 2), X_prev = X;
  double F = objective(L, X, &g);
  double step = 1e-3 / (1.0 + g.norm());
  bool converged = g.norm() <= grad_tol;

  for (int it = 0; it < max_iters && !converged; ++it) {
    GradientMatrix X_try = X - step * g;
    GradientMatrix g_try(X.rows(), 2);
    double F_try = objective(L, X_try, &g_try);
    int backtracks = 0;
    while (F_try > F && backtracks < 40) {
      step *= 0.5;
      X_try = X - step * g;
      F_try = objective(L, X_try, &g_try);
      ++backtracks;
    }
    if (F_try > F) break;  // no progress at tiny step

    X_prev = X;
    g_prev = g;
    X = X_try;
    g = g_try;
    F = F_try;
    if (g.norm() <= grad_tol) {
      converged = true;
      break;
    }
    // Barzilai-Borwein step, safeguarded.
    const GradientMatrix dx = X - X_prev;
    const GradientMatrix dg = g - g_prev;
    const double num = (dx.array() * dg.array()).sum();
    const double den = dg.squaredNorm();
    if (num > 0.0 && den > 0.0)
      step = std::min(num / den, 1e6);
    else
      step = std::max(step, 1e-12) * 2.0;
  }
  return {std::sqrt(std::max(F, 0.0)), converged, X};
}

}  // namespace

DistToCAResult dist_to_ca(const Eigen::MatrixXd& L, const DistToCAOptions& opts) {
  if (L.cols() != 2 || L.rows() < 4 || L.rows() % 2 != 0)
    throw std::invalid_argument("dist_to_ca: input must be (2n+2) x 2");
  const int n = static_cast<int>(L.rows() - 2) / 2;
  const GradientMatrix seed = L.topRows(n);

  Rng rng(opts.seed);
  DistToCAResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < opts.starts; ++s) {
    GradientMatrix X0 = seed;
    if (s > 0) {
      const double scale = 0.5 * (1.0 + seed.norm());
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) X0(i, c) += scale * rng.uniform(-1.0, 1.0);
    }
    const LocalMin m = minimize_from(L, X0, opts.max_iters, opts.grad_tol);
    if (m.value < best.value) {
      best.value = m.value;
      best.argmin = m.argmin;
    }
    best.converged = best.converged || m.converged;
  }
  return best;
}

}  // namespace mintool::area
