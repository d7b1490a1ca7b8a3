#include <cmath>
#include <stdexcept>

#include "mintool/solver.hpp"

namespace mintool::mms {

namespace {

// Smooth bump supported in the disk of radius r around c.
double bump(double x, double y, double cx, double cy, double r) {
  const double rho2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
  if (rho2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho2));
}

}  // namespace

nlohmann::json CompactnessReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : levels) arr.push_back(l.to_json());
  return {{"levels", arr}};
}

CompactnessReport compactness_experiment(const CompactnessConfig& config) {
  if (config.mesh_sizes.size() < 2)
    throw std::invalid_argument("compactness_experiment: need at least two levels");
  for (size_t l = 1; l < config.mesh_sizes.size(); ++l)
    if (config.mesh_sizes[l] % config.mesh_sizes[l - 1] != 0)
      throw std::invalid_argument("compactness_experiment: mesh sizes must be nested");

  const double q = 2.0 * M_PI * config.oscillation;
  // Two stream functions feed the divergence-free pairs (u, v) and (w1, w2).
  auto chi1 = [&](double x, double y) { return std::sin(q * x) * std::sin(q * y) / q; };
  auto chi2 = [&](double x, double y) {
    return (1.0 - std::cos(q * x)) * (1.0 - std::cos(q * y)) / q;
  };
  auto psi = [&](double x, double y) {
    const double h = 1e-6;
    Eigen::VectorXd v(4);
    v[0] = -(chi1(x, y + h) - chi1(x, y - h)) / (2.0 * h);
    v[1] = (chi1(x + h, y) - chi1(x - h, y)) / (2.0 * h);
    v[2] = -(chi2(x, y + h) - chi2(x, y - h)) / (2.0 * h);
    v[3] = (chi2(x + h, y) - chi2(x - h, y)) / (2.0 * h);
    return v;
  };

  const struct {
    double cx, cy, r;
  } bumps[3] = {{0.5, 0.5, 0.35}, {0.3, 0.65, 0.22}, {0.7, 0.3, 0.27}};

  CompactnessReport report;
  double eps = config.eps0;
  for (size_t l = 0; l < config.mesh_sizes.size(); ++l, eps *= 0.5) {
    const int base = config.mesh_sizes[l];
    const Grid grid(base - 1, base - 1, 1.0 / base);

    // Solved base instance and its lifted potentials.
    const auto [ustar, rep] =
        solve_dirichlet(grid, make_sine_bump_boundary(config.boundary_delta).fn, 1,
                        SolveParams{1e-11, 80, "newton"});
    const Potentials pot = build_potentials(ustar);

    DiscreteField Ustar(grid, 4);
    Ustar.comps[0] = ustar.comps[0];
    Ustar.comps[1] = pot.v.comps[0];
    Ustar.comps[2] = pot.w.comps[0];
    Ustar.comps[3] = pot.w.comps[1];

    DiscreteField Un = Ustar;
    for (int i = 0; i < grid.nodes_x(); ++i)
      for (int j = 0; j < grid.nodes_y(); ++j) {
        const Eigen::VectorXd p = psi(grid.x(i), grid.y(j));
        for (int c = 0; c < 4; ++c) Un.at(c, i, j) += eps * p[c];
      }

    CompactnessLevel level;
    level.nx = grid.nx;
    level.h = grid.h;
    level.eps = eps;

    const DiscreteField r = inclusion_residual(Un, nullptr);
    for (const auto& b : bumps) {
      double acc = 0.0;
      for (int j = 1; j <= grid.ny; ++j)
        for (int i = 1; i <= grid.nx; ++i)
          acc += r.at(0, i, j) * bump(grid.x(i), grid.y(j), b.cx, b.cy, b.r) * grid.h * grid.h;
      level.weighted_residuals.push_back(acc);
    }

    double dist_p = 0.0, norm_p = 0.0;
    for (int j = 1; j <= grid.ny; ++j)
      for (int i = 1; i <= grid.nx; ++i) {
        const Eigen::MatrixXd Dn = node_gradient(Un, i, j);
        const Eigen::MatrixXd Ds = node_gradient(Ustar, i, j);
        dist_p += std::pow((Dn - Ds).norm(), config.p_bar) * grid.h * grid.h;
        norm_p += std::pow(Dn.norm(), config.p) * grid.h * grid.h;
      }
    level.w1p_distance = std::pow(dist_p, 1.0 / config.p_bar);
    level.dup_norm = std::pow(norm_p, 1.0 / config.p);

    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace mintool::mms
