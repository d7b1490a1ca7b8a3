#pragma once

#include <vector>

#include "mintool/energy_density.hpp"
#include "mintool/linalg.hpp"
#include "mintool/reports.hpp"
#include "mintool/rng.hpp"

namespace mintool::cvx {

// Unit rank-one direction a (x) b; every rank-one n x 2 matrix is of this
// form up to scale.
struct RankOneDirection {
  Eigen::VectorXd a;  // unit, R^n
  Eigen::Vector2d b;  // unit, R^2
  GradientMatrix matrix() const { return a * b.transpose(); }
};

RankOneDirection random_rank_one(int n, Rng& rng);

// Empirical Legendre-Hadamard constant over a ball times the rank-one sphere.
struct LHReport {
  double region_radius = 0.0;
  double tau = 0.0;
  GradientMatrix worst_X;
  RankOneDirection worst_dir;
  long samples = 0;

  nlohmann::json to_json() const;
};

// d^2/dt^2 |_{t=0} f(X + tY): analytic Hessian contraction when the density
// carries one, else dual-step central differences with a Richardson gate
// (throws on disagreement beyond 1e-4 relative).
double second_variation(const EnergyDensity& f, const GradientMatrix& X,
                        const GradientMatrix& Y);

// Closed form of the same quantity for the area density along a unit
// rank-one line: (s'(0) g(0)^2 - s(0)^2) / g(0)^3.
double second_variation_area_closed(const GradientMatrix& X, const RankOneDirection& dir);

// s'(0) g^2(0) - s^2(0) - 1 together with the three bracket terms whose
// nonnegativity proves the bound; each term must be >= -1e-9 individually.
struct LHGap {
  double value = 0.0;   // a_term + term1 + term2 + term3
  double a_term = 0.0;  // sum <X^{ab}, cof^T(Y^{ab})>^2
  double term1 = 0.0;   // |X|^2 - <X,Y>^2
  double term2 = 0.0;   // a_term det(X^T X) - b_term^2
  double term3 = 0.0;   // det(X^T X) + a_term |X|^2 - 2 <X,Y> b_term
};

LHGap lh_gap_area(const GradientMatrix& X, const RankOneDirection& dir);

// tau = min of the area's second variation over B_{3R/2} x rank-one sphere.
LHReport tau_estimate(double R, int n, long samples, std::uint64_t seed);

// Same scan for a general C^2 density; tau may come out <= 0 (LH failure).
LHReport perturbed_lh_check(const EnergyDensity& f, double R, int n, long samples,
                            std::uint64_t seed);

// Uniform convexity with constant mu of t -> f(X + tY) on all grid triples.
bool mu_rank_one_test(const EnergyDensity& f, const GradientMatrix& X,
                      const RankOneDirection& dir, double mu,
                      const std::vector<double>& t_grid);

// max over a grid of B_{2R} of |f-A| + |Df-DA|_F + |D^2f-D^2A|_op, the
// operator norm estimated by power iteration from 20 random unit directions.
// A grid max lower-bounds the supremum; refining the grid may only grow it.
double c2_distance(const EnergyDensity& f, double R, double grid_step, int n);

}  // namespace mintool::cvx
