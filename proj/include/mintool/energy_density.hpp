#pragma once

#include <functional>
#include <string>

#include "mintool/linalg.hpp"

namespace mintool {

// A C^2 integrand f: R^{n x 2} -> R with derivatives. The Hessian is the
// (2n)x(2n) matrix acting on vec(Y), index (i, c) -> 2*i + c. When no
// analytic Hessian is available, synthesize_hessian installs a central
// finite-difference one (the provider records which kind it carries).
struct EnergyDensity {
  std::string name;
  std::function<double(const GradientMatrix&)> value;
  std::function<GradientMatrix(const GradientMatrix&)> gradient;
  std::function<Eigen::MatrixXd(const GradientMatrix&)> hessian;
  int smoothness_order = 2;
  bool analytic_hessian = true;

  double hessian_form(const GradientMatrix& X, const GradientMatrix& Y) const;
};

// The area density with exact derivatives.
EnergyDensity area_energy();

// f + eps * |X|^2 (gradient += 2 eps X, hessian += 2 eps Id).
EnergyDensity quadratic_shift(const EnergyDensity& f, double eps);

// f + eps (derivatives unchanged).
EnergyDensity constant_shift(const EnergyDensity& f, double eps);

// Installs a finite-difference Hessian at steps {1e-3, 1e-4} with a
// Richardson consistency gate; throws on gate failure at evaluation time.
EnergyDensity synthesize_hessian(EnergyDensity f);

// Central-difference gradient of f.value at step h (testing aid).
GradientMatrix fd_gradient(const EnergyDensity& f, const GradientMatrix& X, double h);

// A_f(X) = Df(X) J and B_f(X) = X^T Df(X) J - f(X) J for a general density.
GradientMatrix field_A_f(const EnergyDensity& f, const GradientMatrix& X);
PlaneMatrix field_B_f(const EnergyDensity& f, const GradientMatrix& X);

// (X; A_f(X); B_f(X)); agrees with area::lift when f is the area density.
LiftedGradient lift_f(const GradientMatrix& X, const EnergyDensity& f);

inline GradientMatrix unvec(const Eigen::VectorXd& v) {
  GradientMatrix Y(v.size() / 2, 2);
  for (int i = 0; i < Y.rows(); ++i) {
    Y(i, 0) = v[2 * i];
    Y(i, 1) = v[2 * i + 1];
  }
  return Y;
}

inline Eigen::VectorXd vec(const GradientMatrix& Y) {
  Eigen::VectorXd v(2 * Y.rows());
  for (int i = 0; i < Y.rows(); ++i) {
    v[2 * i] = Y(i, 0);
    v[2 * i + 1] = Y(i, 1);
  }
  return v;
}

}  // namespace mintool
