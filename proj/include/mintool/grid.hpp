#pragma once

#include <Eigen/Dense>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace mintool::mms {

// Tensor grid on an axis-aligned rectangle. Nodes are indexed
// (i, j) with i = 0..nx+1, j = 0..ny+1; the outermost ring carries the
// Dirichlet data. Node (i, j) sits at origin + h (i, j).
struct Grid {
  int nx = 3;
  int ny = 3;
  double h = 0.25;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();

  Grid() = default;
  Grid(int nx_, int ny_, double h_, Eigen::Vector2d origin_ = Eigen::Vector2d::Zero());

  double x(int i) const { return origin[0] + h * i; }
  double y(int j) const { return origin[1] + h * j; }
  int nodes_x() const { return nx + 2; }
  int nodes_y() const { return ny + 2; }
  double width() const { return h * (nx + 1); }
  double height() const { return h * (ny + 1); }
};

// Grid-sampled vector field including the boundary ring.
struct DiscreteField {
  Grid grid;
  int m = 1;
  std::vector<Eigen::MatrixXd> comps;  // each (nx+2) x (ny+2), indexed (i, j)

  DiscreteField() = default;
  DiscreteField(const Grid& g, int m_);

  double& at(int c, int i, int j) { return comps[c](i, j); }
  double at(int c, int i, int j) const { return comps[c](i, j); }

  bool all_finite() const;
};

using BoundaryFn = std::function<Eigen::VectorXd(double, double)>;

// Fills the ring (and optionally the interior) from a pointwise function.
DiscreteField sample_field(const Grid& g, int m, const BoundaryFn& fn);
void set_ring(DiscreteField& u, const BoundaryFn& fn);

// Named Dirichlet presets for the command line and tests.
//   affine:       a + X0 x                        (n from X0)
//   harmonic:     delta * sin(pi x) cos(2 pi y)    (n = 1)
//   holomorphic:  lambda (x^2 - y^2, 2 x y)        (n = 2, area-stationary)
//   sine-bump:    delta (sin(2 pi x) + sin(2 pi y)) (n = 1)
struct BoundaryPreset {
  std::string name;
  int m = 1;
  BoundaryFn fn;
};
BoundaryPreset make_affine_boundary(const Eigen::MatrixXd& X0, const Eigen::VectorXd& a);
BoundaryPreset make_harmonic_boundary(double delta);
BoundaryPreset make_holomorphic_boundary(double lambda);
BoundaryPreset make_sine_bump_boundary(double delta);
BoundaryPreset boundary_preset_by_name(const std::string& name, double param);

// JSON header + CSV values (columns i, j, x, y, c0..c{m-1}).
void write_field(const std::string& base_path, const DiscreteField& u);
DiscreteField read_field(const std::string& base_path);

}  // namespace mintool::mms
