#include <cmath>
#include <stdexcept>

#include "mintool/area.hpp"
#include "mintool/solver.hpp"

namespace mintool::mms {

namespace {

// Trapezoid path integration of a nodal (m x 2) field: bottom edge then
// vertical columns. `col(i, j)` returns the m-vector of the requested
// derivative component.
DiscreteField integrate_bottom_vertical(const Grid& g, int m,
                                        const std::function<Eigen::VectorXd(int, int, int)>& f) {
  DiscreteField out(g, m);
  const double h2 = g.h / 2.0;
  for (int i = 1; i < g.nodes_x(); ++i) {
    const Eigen::VectorXd step = h2 * (f(i - 1, 0, 0) + f(i, 0, 0));
    for (int c = 0; c < m; ++c) out.at(c, i, 0) = out.at(c, i - 1, 0) + step[c];
  }
  for (int i = 0; i < g.nodes_x(); ++i)
    for (int j = 1; j < g.nodes_y(); ++j) {
      const Eigen::VectorXd step = h2 * (f(i, j - 1, 1) + f(i, j, 1));
      for (int c = 0; c < m; ++c) out.at(c, i, j) = out.at(c, i, j - 1) + step[c];
    }
  return out;
}

DiscreteField integrate_left_horizontal(const Grid& g, int m,
                                        const std::function<Eigen::VectorXd(int, int, int)>& f) {
  DiscreteField out(g, m);
  const double h2 = g.h / 2.0;
  for (int j = 1; j < g.nodes_y(); ++j) {
    const Eigen::VectorXd step = h2 * (f(0, j - 1, 1) + f(0, j, 1));
    for (int c = 0; c < m; ++c) out.at(c, 0, j) = out.at(c, 0, j - 1) + step[c];
  }
  for (int j = 0; j < g.nodes_y(); ++j)
    for (int i = 1; i < g.nodes_x(); ++i) {
      const Eigen::VectorXd step = h2 * (f(i - 1, j, 0) + f(i, j, 0));
      for (int c = 0; c < m; ++c) out.at(c, i, j) = out.at(c, i - 1, j) + step[c];
    }
  return out;
}

double max_field_diff(const DiscreteField& a, const DiscreteField& b) {
  double mx = 0.0;
  for (int c = 0; c < a.m; ++c) mx = std::max(mx, (a.comps[c] - b.comps[c]).cwiseAbs().maxCoeff());
  return mx;
}

// Max over interior nodes and rows of the discrete curl of a nodal m x 2
// field: d1 f_{r,2} - d2 f_{r,1} by central differences.
double max_curl(const Grid& g, int m, const std::vector<Eigen::MatrixXd>& col0,
                const std::vector<Eigen::MatrixXd>& col1) {
  double mx = 0.0;
  const double s = 1.0 / (2.0 * g.h);
  for (int c = 0; c < m; ++c)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        const double curl = s * (col1[c](i + 1, j) - col1[c](i - 1, j)) -
                            s * (col0[c](i, j + 1) - col0[c](i, j - 1));
        mx = std::max(mx, std::abs(curl));
      }
  return mx;
}

}  // namespace

Potentials build_potentials(const DiscreteField& u, double tol_curl) {
  const Grid& g = u.grid;
  const int n = u.m;
  const int NX = g.nodes_x(), NY = g.nodes_y();

  // Nodal fields P = DA(Du) J (n x 2) and Q = B(Du) (2 x 2), stored column-wise.
  std::vector<Eigen::MatrixXd> P0(n, Eigen::MatrixXd(NX, NY)), P1(n, Eigen::MatrixXd(NX, NY));
  std::vector<Eigen::MatrixXd> Q0(2, Eigen::MatrixXd(NX, NY)), Q1(2, Eigen::MatrixXd(NX, NY));
  for (int i = 0; i < NX; ++i) {
    for (int j = 0; j < NY; ++j) {
      const GradientMatrix D = node_gradient(u, i, j);
      const GradientMatrix A = area::area_gradient(D) * symplectic_J();
      const PlaneMatrix B = area::field_B(D);
      for (int c = 0; c < n; ++c) {
        P0[c](i, j) = A(c, 0);
        P1[c](i, j) = A(c, 1);
      }
      for (int c = 0; c < 2; ++c) {
        Q0[c](i, j) = B(c, 0);
        Q1[c](i, j) = B(c, 1);
      }
    }
  }

  auto pa = [&](int i, int j, int dir) {
    Eigen::VectorXd v(n);
    for (int c = 0; c < n; ++c) v[c] = dir == 0 ? P0[c](i, j) : P1[c](i, j);
    return v;
  };
  auto qb = [&](int i, int j, int dir) {
    Eigen::VectorXd v(2);
    for (int c = 0; c < 2; ++c) v[c] = dir == 0 ? Q0[c](i, j) : Q1[c](i, j);
    return v;
  };

  Potentials out;
  out.v = integrate_bottom_vertical(g, n, pa);
  out.w = integrate_bottom_vertical(g, 2, qb);
  const DiscreteField v2 = integrate_left_horizontal(g, n, pa);
  const DiscreteField w2 = integrate_left_horizontal(g, 2, qb);

  out.report.curl_a_max = max_curl(g, n, P0, P1);
  out.report.curl_b_max = max_curl(g, 2, Q0, Q1);
  out.report.path_discrepancy = std::max(max_field_diff(out.v, v2), max_field_diff(out.w, w2));
  out.report.integrable =
      out.report.curl_a_max <= tol_curl && out.report.curl_b_max <= tol_curl;
  return out;
}

std::pair<DiscreteField, MongeAmpereReport> ma_potential(const DiscreteField& w,
                                                         double div_tol) {
  if (w.m != 2) throw std::invalid_argument("ma_potential: w must have 2 components");
  const Grid& g = w.grid;
  MongeAmpereReport rep;

  // div(w) should vanish (trace-free B); locate the worst node.
  const double s = 1.0 / (2.0 * g.h);
  int wi = -1, wj = -1;
  for (int j = 1; j <= g.ny; ++j)
    for (int i = 1; i <= g.nx; ++i) {
      const double div = s * (w.comps[0](i + 1, j) - w.comps[0](i - 1, j)) +
                         s * (w.comps[1](i, j + 1) - w.comps[1](i, j - 1));
      if (std::abs(div) > rep.max_div_w) {
        rep.max_div_w = std::abs(div);
        wi = i;
        wj = j;
      }
    }
  if (rep.max_div_w > div_tol)
    throw std::runtime_error("ma_potential: div(w) = " + std::to_string(rep.max_div_w) +
                             " at node (" + std::to_string(wi) + "," + std::to_string(wj) +
                             ") exceeds tolerance");

  // grad z = (w2, -w1).
  auto gz = [&](int i, int j, int dir) {
    Eigen::VectorXd v(1);
    v[0] = dir == 0 ? w.comps[1](i, j) : -w.comps[0](i, j);
    return v;
  };
  DiscreteField z = integrate_bottom_vertical(g, 1, gz);
  const DiscreteField z2 = integrate_left_horizontal(g, 1, gz);
  rep.path_discrepancy = max_field_diff(z, z2);

  rep.min_laplacian = std::numeric_limits<double>::infinity();
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  const auto& Z = z.comps[0];
  const double ih2 = 1.0 / (g.h * g.h);
  for (int j = 1; j <= g.ny; ++j) {
    for (int i = 1; i <= g.nx; ++i) {
      const double zxx = ih2 * (Z(i + 1, j) - 2.0 * Z(i, j) + Z(i - 1, j));
      const double zyy = ih2 * (Z(i, j + 1) - 2.0 * Z(i, j) + Z(i, j - 1));
      const double zxy = 0.25 * ih2 *
                         (Z(i + 1, j + 1) - Z(i + 1, j - 1) - Z(i - 1, j + 1) + Z(i - 1, j - 1));
      const double det = zxx * zyy - zxy * zxy;
      const double tr = zxx + zyy;
      const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
      rep.max_det_residual = std::max(rep.max_det_residual, std::abs(det - 1.0));
      rep.min_laplacian = std::min(rep.min_laplacian, tr);
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, 0.5 * tr - disc);
    }
  }
  return {std::move(z), rep};
}

DiscreteField inclusion_residual(const DiscreteField& U, double* max_norm) {
  if (U.m < 4 || U.m % 2 != 0)
    throw std::invalid_argument("inclusion_residual: field must have 2n+2 components");
  const Grid& g = U.grid;
  DiscreteField r(g, 1);
  double mx = 0.0;
  for (int j = 1; j <= g.ny; ++j) {
    for (int i = 1; i <= g.nx; ++i) {
      const Eigen::MatrixXd D = node_gradient(U, i, j);
      const double d = area::dist_to_ca(D).value;
      r.at(0, i, j) = d;
      mx = std::max(mx, d);
    }
  }
  if (max_norm) *max_norm = mx;
  return r;
}

}  // namespace mintool::mms
