#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mintool/grid.hpp"
#include "mintool/linalg.hpp"

namespace mintool::mms {

// Four-point cell-averaged gradient of the bilinear interpolant on cell
// (ci, cj); rows are components.
Eigen::MatrixXd cell_gradient(const DiscreteField& u, int ci, int cj);

// sum over cells of A(Du_cell) h^2.
double discrete_energy(const DiscreteField& u);

struct SolveParams {
  double tol = 1e-10;
  int max_iter = 60;
  std::string method = "newton";  // newton | descent
};

struct SolveReport {
  int iterations = 0;
  double final_energy = 0.0;
  double el_residual_norm = 0.0;
  double inner_residual_norm = 0.0;
  bool converged = false;

  nlohmann::json to_json() const {
    return {{"iterations", iterations},
            {"final_energy", final_energy},
            {"el_residual_norm", el_residual_norm},
            {"inner_residual_norm", inner_residual_norm},
            {"converged", converged}};
  }
};

// Minimizes the discrete area energy under Dirichlet ring data. Newton with
// line search and Levenberg damping by default; plain descent as fallback.
// Energy never increases across accepted iterations.
std::pair<DiscreteField, SolveReport> solve_dirichlet(const Grid& grid,
                                                      const BoundaryFn& boundary, int m,
                                                      const SolveParams& params = {});

// Conservative flux-difference residual of div(DA(Du)) = 0 per interior node
// and component; exactly zero on affine fields. Returns the nodal field
// (m comps, ring zero) and writes the max norm.
DiscreteField el_residual(const DiscreteField& u, double* max_norm);

// Discrete divergence of (Du)^T DA(Du) - A(Du) Id per interior node (2 comps).
DiscreteField inner_variation_residual(const DiscreteField& u, double* max_norm);

// Weak form: sum over cells of h^2 <T_cell, DPhi_cell> for a smooth test
// field Phi (compact support assumed); the cell gradient of Phi uses the same
// four-point stencil, so a constant T integrates to exactly zero.
double inner_variation_weak(const DiscreteField& u,
                            const std::function<Eigen::Vector2d(double, double)>& phi);

// Nodal gradient by central differences (one-sided second order on the ring).
Eigen::MatrixXd node_gradient(const DiscreteField& u, int i, int j);

struct PotentialReport {
  double curl_a_max = 0.0;       // integrability of DA(Du) J, row-wise
  double curl_b_max = 0.0;       // integrability of B(Du)
  double path_discrepancy = 0.0; // two path families compared pointwise
  bool integrable = true;

  nlohmann::json to_json() const {
    return {{"curl_a_max", curl_a_max},
            {"curl_b_max", curl_b_max},
            {"path_discrepancy", path_discrepancy},
            {"integrable", integrable}};
  }
};

struct Potentials {
  DiscreteField v;  // n comps, Dv = A(Du)
  DiscreteField w;  // 2 comps, Dw = B(Du)
  PotentialReport report;
};

// Reconstructs v and w by path integration (bottom edge then vertical),
// audited against the (left edge then horizontal) family. Potentials are
// normalized to zero at the bottom-left corner. Fields are produced even
// when the curl audit fails; the report flags non-integrability.
Potentials build_potentials(const DiscreteField& u, double tol_curl = 1e-3);

struct MongeAmpereReport {
  double max_det_residual = 0.0;  // max |det(D^2 z) - 1| over interior nodes
  double min_laplacian = 0.0;     // min of Delta z
  double min_eigenvalue = 0.0;    // min eigenvalue of D^2 z
  double path_discrepancy = 0.0;
  double max_div_w = 0.0;

  nlohmann::json to_json() const {
    return {{"max_det_residual", max_det_residual},
            {"min_laplacian", min_laplacian},
            {"min_eigenvalue", min_eigenvalue},
            {"path_discrepancy", path_discrepancy},
            {"max_div_w", max_div_w}};
  }
};

// Integrates the rotated field (w2, -w1) to the scalar potential z and
// reports the centered-difference Hessian diagnostics. Throws when the
// discrete divergence of w exceeds div_tol, naming the worst node.
std::pair<DiscreteField, MongeAmpereReport> ma_potential(const DiscreteField& w,
                                                         double div_tol = 1e-3);

// Nodewise distance of the stacked discrete gradient to the constraint set.
DiscreteField inclusion_residual(const DiscreteField& U, double* max_norm);

struct CompactnessConfig {
  std::vector<int> mesh_sizes;  // values of nx+1 per level; each must divide the next
  double eps0 = 0.5;            // perturbation at level 1; halves per level
  double boundary_delta = 0.3;  // sine-bump amplitude for the solved base
  int oscillation = 3;          // frequency of the divergence-free perturbation
  double p = 4.0;
  double p_bar = 2.0;
  std::uint64_t seed = 7;

  static CompactnessConfig levels(int L) {
    CompactnessConfig c;
    for (int l = 0; l < L; ++l) c.mesh_sizes.push_back(8 << l);
    return c;
  }
};

struct CompactnessLevel {
  int nx = 0;
  double h = 0.0;
  double eps = 0.0;
  std::vector<double> weighted_residuals;  // one per bump weight
  double w1p_distance = 0.0;               // |D U_n - D U*|_{p_bar}
  double dup_norm = 0.0;                   // |D U_n|_p (equiboundedness)

  nlohmann::json to_json() const {
    return {{"nx", nx},
            {"h", h},
            {"eps", eps},
            {"weighted_residuals", weighted_residuals},
            {"w1p_distance", w1p_distance},
            {"dup_norm", dup_norm}};
  }
};

struct CompactnessReport {
  std::vector<CompactnessLevel> levels;
  nlohmann::json to_json() const;
};

// Perturbs the lifted field of a solved instance by eps_n times an
// oscillatory divergence-free map on a nested mesh family and tracks the
// weighted inclusion residual and the W^{1,p_bar} distance.
CompactnessReport compactness_experiment(const CompactnessConfig& config);

}  // namespace mintool::mms
