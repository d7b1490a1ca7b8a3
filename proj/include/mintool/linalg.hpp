#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace mintool {

// Gradient of a map Omega -> R^n at a point: n rows, 2 columns.
using GradientMatrix = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using PlaneMatrix = Eigen::Matrix2d;

// The fixed symplectic matrix: J^T = -J, J^2 = -Id.
inline const PlaneMatrix& symplectic_J() {
  static const PlaneMatrix J = (PlaneMatrix() << 0.0, 1.0, -1.0, 0.0).finished();
  return J;
}

// cof(M) is the matrix with M * cof(M) = det(M) * Id.
inline PlaneMatrix cof(const PlaneMatrix& M) {
  PlaneMatrix C;
  C << M(1, 1), -M(0, 1), -M(1, 0), M(0, 0);
  return C;
}

// The triple (alpha, beta, gamma) carried by B(X); alpha*beta - gamma^2 = 1.
struct BCoefficients {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;

  // B reconstructed as ((-gamma, -alpha), (beta, gamma)).
  PlaneMatrix to_matrix() const {
    PlaneMatrix B;
    B << -gamma, -alpha, beta, gamma;
    return B;
  }
};

// Stacked gradient (X; A; B) in R^{(2n+2) x 2}.
struct LiftedGradient {
  GradientMatrix x_block;
  GradientMatrix a_block;
  PlaneMatrix b_block;

  int n() const { return static_cast<int>(x_block.rows()); }

  Eigen::MatrixXd stacked() const {
    const int rows = n();
    Eigen::MatrixXd Y(2 * rows + 2, 2);
    Y.topRows(rows) = x_block;
    Y.middleRows(rows, rows) = a_block;
    Y.bottomRows(2) = b_block;
    return Y;
  }

  static LiftedGradient from_stacked(const Eigen::MatrixXd& Y) {
    if (Y.cols() != 2 || Y.rows() < 4 || Y.rows() % 2 != 0)
      throw std::invalid_argument("stacked matrix must be (2n+2) x 2");
    const int rows = static_cast<int>(Y.rows() - 2) / 2;
    LiftedGradient L;
    L.x_block = Y.topRows(rows);
    L.a_block = Y.middleRows(rows, rows);
    L.b_block = Y.bottomRows(2);
    return L;
  }
};

// Row-major JSON with an explicit "n" field.
inline nlohmann::json to_json(const GradientMatrix& X) {
  nlohmann::json j;
  j["n"] = X.rows();
  nlohmann::json vals = nlohmann::json::array();
  for (int i = 0; i < X.rows(); ++i)
    for (int c = 0; c < 2; ++c) vals.push_back(X(i, c));
  j["values"] = vals;
  return j;
}

inline GradientMatrix gradient_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto& vals = j.at("values");
  if (static_cast<int>(vals.size()) != 2 * n)
    throw std::invalid_argument("gradient json: values size mismatch");
  GradientMatrix X(n, 2);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 2; ++c) X(i, c) = vals[2 * i + c].get<double>();
  return X;
}

inline nlohmann::json to_json(const LiftedGradient& L) {
  nlohmann::json j;
  j["n"] = L.n();
  nlohmann::json vals = nlohmann::json::array();
  const Eigen::MatrixXd Y = L.stacked();
  for (int i = 0; i < Y.rows(); ++i)
    for (int c = 0; c < 2; ++c) vals.push_back(Y(i, c));
  j["values"] = vals;
  return j;
}

inline LiftedGradient lifted_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto& vals = j.at("values");
  Eigen::MatrixXd Y(2 * n + 2, 2);
  if (static_cast<int>(vals.size()) != 2 * (2 * n + 2))
    throw std::invalid_argument("lifted json: values size mismatch");
  for (int i = 0; i < Y.rows(); ++i)
    for (int c = 0; c < 2; ++c) Y(i, c) = vals[2 * i + c].get<double>();
  return LiftedGradient::from_stacked(Y);
}

}  // namespace mintool
