#include "mintool/energy_density.hpp"

#include <cmath>
#include <stdexcept>

#include "mintool/area.hpp"

namespace mintool {

double EnergyDensity::hessian_form(const GradientMatrix& X, const GradientMatrix& Y) const {
  const Eigen::VectorXd y = vec(Y);
  return y.dot(hessian(X) * y);
}

EnergyDensity area_energy() {
  EnergyDensity f;
  f.name = "area";
  f.value = [](const GradientMatrix& X) { return area::area_density(X); };
  f.gradient = [](const GradientMatrix& X) { return area::area_gradient(X); };
  f.hessian = [](const GradientMatrix& X) { return area::area_hessian(X); };
  f.smoothness_order = 6;
  f.analytic_hessian = true;
  return f;
}

EnergyDensity quadratic_shift(const EnergyDensity& f, double eps) {
  EnergyDensity g = f;
  g.name = f.name + (eps >= 0 ? "+" : "") + std::to_string(eps) + "|X|^2";
  g.value = [f, eps](const GradientMatrix& X) { return f.value(X) + eps * X.squaredNorm(); };
  g.gradient = [f, eps](const GradientMatrix& X) {
    return GradientMatrix(f.gradient(X) + 2.0 * eps * X);
  };
  g.hessian = [f, eps](const GradientMatrix& X) {
    Eigen::MatrixXd H = f.hessian(X);
    H.diagonal().array() += 2.0 * eps;
    return H;
  };
  return g;
}

EnergyDensity constant_shift(const EnergyDensity& f, double eps) {
  EnergyDensity g = f;
  g.name = f.name + "+const";
  g.value = [f, eps](const GradientMatrix& X) { return f.value(X) + eps; };
  return g;
}

EnergyDensity synthesize_hessian(EnergyDensity f) {
  const auto value = f.value;
  f.analytic_hessian = false;
  f.hessian = [value](const GradientMatrix& X) {
    const int N = 2 * static_cast<int>(X.rows());
    auto fd = [&](double h) {
      Eigen::MatrixXd H(N, N);
      for (int k = 0; k < N; ++k) {
        for (int l = k; l < N; ++l) {
          GradientMatrix Xpp = X, Xpm = X, Xmp = X, Xmm = X;
          Xpp(k / 2, k % 2) += h;
          Xpp(l / 2, l % 2) += h;
          Xpm(k / 2, k % 2) += h;
          Xpm(l / 2, l % 2) -= h;
          Xmp(k / 2, k % 2) -= h;
          Xmp(l / 2, l % 2) += h;
          Xmm(k / 2, k % 2) -= h;
          Xmm(l / 2, l % 2) -= h;
          H(k, l) = H(l, k) =
              (value(Xpp) - value(Xpm) - value(Xmp) + value(Xmm)) / (4.0 * h * h);
        }
      }
      return H;
    };
    const Eigen::MatrixXd Ha = fd(1e-3);
    const Eigen::MatrixXd Hb = fd(1e-4);
    const double scale = std::max(1.0, Ha.norm());
    if ((Ha - Hb).norm() > 1e-4 * scale)
      throw std::runtime_error("finite-difference Hessian failed the Richardson gate");
    return Hb;
  };
  return f;
}

GradientMatrix field_A_f(const EnergyDensity& f, const GradientMatrix& X) {
  return f.gradient(X) * symplectic_J();
}

PlaneMatrix field_B_f(const EnergyDensity& f, const GradientMatrix& X) {
  const PlaneMatrix& J = symplectic_J();
  return X.transpose() * f.gradient(X) * J - f.value(X) * J;
}

LiftedGradient lift_f(const GradientMatrix& X, const EnergyDensity& f) {
  LiftedGradient L;
  L.x_block = X;
  L.a_block = field_A_f(f, X);
  L.b_block = field_B_f(f, X);
  return L;
}

GradientMatrix fd_gradient(const EnergyDensity& f, const GradientMatrix& X, double h) {
  GradientMatrix G(X.rows(), 2);
  for (int i = 0; i < X.rows(); ++i) {
    for (int c = 0; c < 2; ++c) {
      GradientMatrix Xp = X, Xm = X;
      Xp(i, c) += h;
      Xm(i, c) -= h;
      G(i, c) = (f.value(Xp) - f.value(Xm)) / (2.0 * h);
    }
  }
  return G;
}

}  // namespace mintool
