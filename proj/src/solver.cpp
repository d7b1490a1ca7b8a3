#include "mintool/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <stdexcept>

#include "mintool/area.hpp"
#include "mintool/energy_density.hpp"

namespace mintool::mms {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline int sign_x(int corner) { return (corner & 1) ? 1 : -1; }   // corner bit 0: +x side
inline int sign_y(int corner) { return (corner & 2) ? 1 : -1; }   // corner bit 1: +y side

// Interior dof index of component c at node (i, j); -1 on the ring.
inline long dof_index(const Grid& g, int i, int j, int c, int m) {
  if (i < 1 || i > g.nx || j < 1 || j > g.ny) return -1;
  return (static_cast<long>(j - 1) * g.nx + (i - 1)) * m + c;
}

// Solves the standard 5-point Laplacian for the initial guess; any smooth
// field compatible with the ring data would do.
void laplace_init(DiscreteField& u) {
  const Grid& g = u.grid;
  const long N = static_cast<long>(g.nx) * g.ny;
  std::vector<Triplet> trips;
  trips.reserve(5 * N);
  for (int j = 1; j <= g.ny; ++j) {
    for (int i = 1; i <= g.nx; ++i) {
      const long row = dof_index(g, i, j, 0, 1);
      trips.emplace_back(row, row, 4.0);
      for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const long col = dof_index(g, i + di, j + dj, 0, 1);
        if (col >= 0) trips.emplace_back(row, col, -1.0);
      }
    }
  }
  SpMat A(N, N);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMat> solver(A);

  for (int c = 0; c < u.m; ++c) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) {
        const long row = dof_index(g, i, j, 0, 1);
        for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}})
          if (dof_index(g, i + di, j + dj, 0, 1) < 0) rhs[row] += u.at(c, i + di, j + dj);
      }
    const Eigen::VectorXd sol = solver.solve(rhs);
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) u.at(c, i, j) = sol[dof_index(g, i, j, 0, 1)];
  }
}

Eigen::VectorXd energy_gradient(const DiscreteField& u) {
  const Grid& g = u.grid;
  const int m = u.m;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<long>(g.nx) * g.ny * m);
  const double w = g.h * g.h / (2.0 * g.h);
  for (int cj = 0; cj <= g.ny; ++cj) {
    for (int ci = 0; ci <= g.nx; ++ci) {
      const GradientMatrix G = cell_gradient(u, ci, cj);
      const GradientMatrix D = area::area_gradient(G);
      for (int corner = 0; corner < 4; ++corner) {
        const int i = ci + (corner & 1), j = cj + ((corner >> 1) & 1);
        for (int c = 0; c < m; ++c) {
          const long idx = dof_index(g, i, j, c, m);
          if (idx < 0) continue;
          grad[idx] += w * (sign_x(corner) * D(c, 0) + sign_y(corner) * D(c, 1));
        }
      }
    }
  }
  return grad;
}

SpMat energy_hessian(const DiscreteField& u) {
  const Grid& g = u.grid;
  const int m = u.m;
  const long N = static_cast<long>(g.nx) * g.ny * m;
  std::vector<Triplet> trips;
  trips.reserve(16L * m * m * (g.nx + 1) * (g.ny + 1));
  const double w = 1.0 / (2.0 * g.h);
  for (int cj = 0; cj <= g.ny; ++cj) {
    for (int ci = 0; ci <= g.nx; ++ci) {
      const Eigen::MatrixXd H = area::area_hessian(cell_gradient(u, ci, cj));
      for (int ka = 0; ka < 4; ++ka) {
        const int ia = ci + (ka & 1), ja = cj + ((ka >> 1) & 1);
        for (int kb = 0; kb < 4; ++kb) {
          const int ib = ci + (kb & 1), jb = cj + ((kb >> 1) & 1);
          for (int ca = 0; ca < m; ++ca) {
            const long ra = dof_index(g, ia, ja, ca, m);
            if (ra < 0) continue;
            for (int cb = 0; cb < m; ++cb) {
              const long rb = dof_index(g, ib, jb, cb, m);
              if (rb < 0) continue;
              double val = 0.0;
              for (int da = 0; da < 2; ++da) {
                const double sa = (da == 0 ? sign_x(ka) : sign_y(ka)) * w;
                for (int db = 0; db < 2; ++db) {
                  const double sb = (db == 0 ? sign_x(kb) : sign_y(kb)) * w;
                  val += sa * H(2 * ca + da, 2 * cb + db) * sb;
                }
              }
              trips.emplace_back(ra, rb, val * g.h * g.h);
            }
          }
        }
      }
    }
  }
  SpMat H(N, N);
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

void apply_update(DiscreteField& u, const Eigen::VectorXd& d, double t) {
  const Grid& g = u.grid;
  for (int c = 0; c < u.m; ++c)
    for (int j = 1; j <= g.ny; ++j)
      for (int i = 1; i <= g.nx; ++i) u.at(c, i, j) += t * d[dof_index(g, i, j, c, u.m)];
}

}  // namespace

Eigen::MatrixXd cell_gradient(const DiscreteField& u, int ci, int cj) {
  Eigen::MatrixXd G(u.m, 2);
  const double s = 1.0 / (2.0 * u.grid.h);
  for (int c = 0; c < u.m; ++c) {
    const auto& U = u.comps[c];
    G(c, 0) = s * (U(ci + 1, cj) - U(ci, cj) + U(ci + 1, cj + 1) - U(ci, cj + 1));
    G(c, 1) = s * (U(ci, cj + 1) - U(ci, cj) + U(ci + 1, cj + 1) - U(ci + 1, cj));
  }
  return G;
}

double discrete_energy(const DiscreteField& u) {
  const Grid& g = u.grid;
  double E = 0.0;
  for (int cj = 0; cj <= g.ny; ++cj)
    for (int ci = 0; ci <= g.nx; ++ci)
      E += area::area_density(cell_gradient(u, ci, cj)) * g.h * g.h;
  return E;
}

DiscreteField el_residual(const DiscreteField& u, double* max_norm) {
  const Grid& g = u.grid;
  DiscreteField r(g, u.m);
  const double w = 1.0 / (2.0 * g.h);
  for (int cj = 0; cj <= g.ny; ++cj) {
    for (int ci = 0; ci <= g.nx; ++ci) {
      const GradientMatrix D = area::area_gradient(cell_gradient(u, ci, cj));
      for (int corner = 0; corner < 4; ++corner) {
        const int i = ci + (corner & 1), j = cj + ((corner >> 1) & 1);
        for (int c = 0; c < u.m; ++c)
          r.at(c, i, j) -= w * (sign_x(corner) * D(c, 0) + sign_y(corner) * D(c, 1));
      }
    }
  }
  double mx = 0.0;
  for (int c = 0; c < u.m; ++c) {
    for (int j = 0; j <= g.ny + 1; ++j)
      for (int i = 0; i <= g.nx + 1; ++i) {
        if (i < 1 || i > g.nx || j < 1 || j > g.ny)
          r.at(c, i, j) = 0.0;
        else
          mx = std::max(mx, std::abs(r.at(c, i, j)));
      }
  }
  if (max_norm) *max_norm = mx;
  return r;
}

DiscreteField inner_variation_residual(const DiscreteField& u, double* max_norm) {
  const Grid& g = u.grid;
  DiscreteField r(g, 2);
  const double w = 1.0 / (2.0 * g.h);
  for (int cj = 0; cj <= g.ny; ++cj) {
    for (int ci = 0; ci <= g.nx; ++ci) {
      const GradientMatrix G = cell_gradient(u, ci, cj);
      const PlaneMatrix T = G.transpose() * area::area_gradient(G) -
                            area::area_density(G) * PlaneMatrix::Identity();
      for (int corner = 0; corner < 4; ++corner) {
        const int i = ci + (corner & 1), j = cj + ((corner >> 1) & 1);
        for (int c = 0; c < 2; ++c)
          r.at(c, i, j) -= w * (sign_x(corner) * T(c, 0) + sign_y(corner) * T(c, 1));
      }
    }
  }
  double mx = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j <= g.ny + 1; ++j)
      for (int i = 0; i <= g.nx + 1; ++i) {
        if (i < 1 || i > g.nx || j < 1 || j > g.ny)
          r.at(c, i, j) = 0.0;
        else
          mx = std::max(mx, std::abs(r.at(c, i, j)));
      }
  }
  if (max_norm) *max_norm = mx;
  return r;
}

double inner_variation_weak(const DiscreteField& u,
                            const std::function<Eigen::Vector2d(double, double)>& phi) {
  const Grid& g = u.grid;
  DiscreteField ph(g, 2);
  for (int i = 0; i < g.nodes_x(); ++i)
    for (int j = 0; j < g.nodes_y(); ++j) {
      const Eigen::Vector2d v = phi(g.x(i), g.y(j));
      ph.at(0, i, j) = v[0];
      ph.at(1, i, j) = v[1];
    }
  double sum = 0.0;
  for (int cj = 0; cj <= g.ny; ++cj) {
    for (int ci = 0; ci <= g.nx; ++ci) {
      const GradientMatrix G = cell_gradient(u, ci, cj);
      const PlaneMatrix T = G.transpose() * area::area_gradient(G) -
                            area::area_density(G) * PlaneMatrix::Identity();
      const Eigen::MatrixXd DP = cell_gradient(ph, ci, cj);
      sum += g.h * g.h * (T.array() * DP.array()).sum();
    }
  }
  return sum;
}

Eigen::MatrixXd node_gradient(const DiscreteField& u, int i, int j) {
  const Grid& g = u.grid;
  const double s = 1.0 / (2.0 * g.h);
  Eigen::MatrixXd D(u.m, 2);
  const int NX = g.nodes_x(), NY = g.nodes_y();
  for (int c = 0; c < u.m; ++c) {
    const auto& U = u.comps[c];
    if (i == 0)
      D(c, 0) = s * (-3.0 * U(0, j) + 4.0 * U(1, j) - U(2, j));
    else if (i == NX - 1)
      D(c, 0) = s * (3.0 * U(NX - 1, j) - 4.0 * U(NX - 2, j) + U(NX - 3, j));
    else
      D(c, 0) = s * (U(i + 1, j) - U(i - 1, j));
    if (j == 0)
      D(c, 1) = s * (-3.0 * U(i, 0) + 4.0 * U(i, 1) - U(i, 2));
    else if (j == NY - 1)
      D(c, 1) = s * (3.0 * U(i, NY - 1) - 4.0 * U(i, NY - 2) + U(i, NY - 3));
    else
      D(c, 1) = s * (U(i, j + 1) - U(i, j - 1));
  }
  return D;
}

std::pair<DiscreteField, SolveReport> solve_dirichlet(const Grid& grid,
                                                      const BoundaryFn& boundary, int m,
                                                      const SolveParams& params) {
  DiscreteField u(grid, m);
  set_ring(u, boundary);
  laplace_init(u);

  SolveReport rep;
  double E = discrete_energy(u);
  double res_norm = 0.0;
  el_residual(u, &res_norm);
  const bool use_newton = params.method != "descent";
  double damping = 0.0;

  while (rep.iterations < params.max_iter && res_norm > params.tol) {
    const Eigen::VectorXd g = energy_gradient(u);
    Eigen::VectorXd d;

    if (use_newton) {
      SpMat H = energy_hessian(u);
      double scale = 0.0;
      for (int k = 0; k < H.rows(); ++k) scale += std::abs(H.coeff(k, k));
      scale = std::max(scale / H.rows(), 1e-16);

      bool have_direction = false;
      for (int attempt = 0; attempt < 8 && !have_direction; ++attempt) {
        SpMat Hd = H;
        if (damping > 0.0) {
          for (int k = 0; k < Hd.rows(); ++k) Hd.coeffRef(k, k) += damping * scale;
        }
        Eigen::SimplicialLDLT<SpMat> ldlt(Hd);
        if (ldlt.info() == Eigen::Success) {
          d = ldlt.solve(-g);
          if (ldlt.info() == Eigen::Success && d.dot(g) < 0.0) {
            have_direction = true;
            damping = (attempt == 0) ? damping * 0.25 : damping;
            break;
          }
        }
        damping = (damping == 0.0) ? 1e-8 : damping * 100.0;
      }
      if (!have_direction) d = -g;  // indefinite far field: fall back to descent
    } else {
      d = -g;
    }

    // Backtracking line search; energy must not increase.
    const double slope = d.dot(g);
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 50; ++bt) {
      DiscreteField trial = u;
      apply_update(trial, d, t);
      const double Et = discrete_energy(trial);
      if (Et <= E + 1e-4 * t * slope) {
        u = std::move(trial);
        E = Et;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    ++rep.iterations;
    if (!accepted) break;  // divergence: line search exhausted
    el_residual(u, &res_norm);
  }

  rep.final_energy = E;
  rep.el_residual_norm = res_norm;
  inner_variation_residual(u, &rep.inner_residual_norm);
  rep.converged = res_norm <= params.tol;
  return {std::move(u), rep};
}

}  // namespace mintool::mms
