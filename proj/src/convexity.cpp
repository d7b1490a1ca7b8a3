#include "mintool/convexity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mintool/area.hpp"
#include "mintool/parallel.hpp"

namespace mintool::cvx {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(const RankOneDirection& dir) {
  if (std::abs(dir.a.norm() - 1.0) > 1e-10 || std::abs(dir.b.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("direction factors must be unit vectors");
}

std::uint64_t chunk_seed(std::uint64_t seed, long chunk) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(chunk + 1));
}
}  // namespace

RankOneDirection random_rank_one(int n, Rng& rng) {
  RankOneDirection d;
  d.a = rng.sphere(n);
  d.b = rng.sphere(2);
  return d;
}

nlohmann::json LHReport::to_json() const {
  return {{"schema_version", kSchemaVersion},
          {"R", region_radius},
          {"tau", tau},
          {"samples", samples},
          {"worst_X", mintool::to_json(worst_X)},
          {"worst_a", std::vector<double>(worst_dir.a.data(), worst_dir.a.data() + worst_dir.a.size())},
          {"worst_b", std::vector<double>{worst_dir.b[0], worst_dir.b[1]}}};
}

double second_variation(const EnergyDensity& f, const GradientMatrix& X,
                        const GradientMatrix& Y) {
  if (f.hessian) return f.hessian_form(X, Y);
  auto fd = [&](double h) {
    return (f.value(X + h * Y) - 2.0 * f.value(X) + f.value(X - h * Y)) / (h * h);
  };
  const double coarse = fd(1e-3);
  const double fine = fd(1e-4);
  if (std::abs(coarse - fine) > 1e-4 * (1.0 + std::abs(fine)))
    throw std::runtime_error(
        "second_variation: finite differences disagree beyond the Richardson gate");
  return fine;
}

double second_variation_area_closed(const GradientMatrix& X, const RankOneDirection& dir) {
  require_unit(dir);
  const GradientMatrix Y = dir.matrix();
  const int n = static_cast<int>(X.rows());

  double a_term = 0.0, b_term = 0.0, det_sum = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double inner = area::pair_cof_inner(X, Y, a, b);
      const double d = X(a, 0) * X(b, 1) - X(a, 1) * X(b, 0);
      a_term += inner * inner;
      b_term += d * inner;
      det_sum += d * d;
    }
  }
  const double g2 = 1.0 + X.squaredNorm() + det_sum;
  const double s0 = (X.array() * Y.array()).sum() + b_term;
  const double sp = 1.0 + a_term;  // |Y| = 1
  return (sp * g2 - s0 * s0) / (g2 * std::sqrt(g2));
}

LHGap lh_gap_area(const GradientMatrix& X, const RankOneDirection& dir) {
  require_unit(dir);
  const GradientMatrix Y = dir.matrix();
  const int n = static_cast<int>(X.rows());

  double a_term = 0.0, b_term = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double inner = area::pair_cof_inner(X, Y, a, b);
      const double d = X(a, 0) * X(b, 1) - X(a, 1) * X(b, 0);
      a_term += inner * inner;
      b_term += d * inner;
    }
  }
  const double det = (X.transpose() * X).determinant();
  const double xy = (X.array() * Y.array()).sum();

  LHGap g;
  g.a_term = a_term;
  g.term1 = X.squaredNorm() - xy * xy;
  g.term2 = a_term * det - b_term * b_term;
  g.term3 = det + a_term * X.squaredNorm() - 2.0 * xy * b_term;
  g.value = g.a_term + g.term1 + g.term2 + g.term3;
  return g;
}

namespace {

struct LHBest {
  double tau = kInf;
  GradientMatrix X;
  RankOneDirection dir;
};

LHReport lh_scan(const EnergyDensity& f, double R, int n, long samples,
                 std::uint64_t seed) {
  const double radius = 1.5 * R;
  const long chunk = 2048;
  const long n_chunks = (samples + chunk - 1) / chunk;
  std::vector<LHBest> locals(n_chunks);
  parallel_chunks(samples, chunk, [&](long c, long begin, long end) {
    Rng rng(chunk_seed(seed, c));
    LHBest& b = locals[c];
    for (long i = begin; i < end; ++i) {
      const GradientMatrix X = rng.stratified_ball_matrix(n, radius, i, samples);
      const RankOneDirection dir = random_rank_one(n, rng);
      const double sv = second_variation(f, X, dir.matrix());
      if (sv < b.tau) {
        b.tau = sv;
        b.X = X;
        b.dir = dir;
      }
    }
  });
  LHBest best;
  for (const LHBest& b : locals)
    if (b.tau < best.tau) best = b;

  LHReport rep;
  rep.region_radius = R;
  rep.tau = best.tau;
  rep.worst_X = best.X;
  rep.worst_dir = best.dir;
  rep.samples = samples;
  return rep;
}

}  // namespace

LHReport tau_estimate(double R, int n, long samples, std::uint64_t seed) {
  if (R <= 0.0) throw std::domain_error("tau_estimate: R must be positive");
  return lh_scan(area_energy(), R, n, samples, seed);
}

LHReport perturbed_lh_check(const EnergyDensity& f, double R, int n, long samples,
                            std::uint64_t seed) {
  return lh_scan(f, R, n, samples, seed);
}

bool mu_rank_one_test(const EnergyDensity& f, const GradientMatrix& X,
                      const RankOneDirection& dir, double mu,
                      const std::vector<double>& t_grid) {
  if (t_grid.size() < 3)
    throw std::invalid_argument("mu_rank_one_test: need at least 3 grid points");
  require_unit(dir);
  const GradientMatrix Y = dir.matrix();
  std::vector<double> phi(t_grid.size());
  for (size_t i = 0; i < t_grid.size(); ++i) phi[i] = f.value(X + t_grid[i] * Y);

  const size_t m = t_grid.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      for (size_t k = j + 1; k < m; ++k) {
        const double span = t_grid[k] - t_grid[i];
        if (span <= 0.0) continue;
        const double t1 = (t_grid[k] - t_grid[j]) / span;  // weight on phi[i]
        const double t2 = 1.0 - t1;
        const double bound = t1 * phi[i] + t2 * phi[k] - t1 * t2 * mu * span * span;
        if (phi[j] > bound + 1e-10) return false;
      }
    }
  }
  return true;
}

double c2_distance(const EnergyDensity& f, double R, double grid_step, int n) {
  if (grid_step <= 0.0) throw std::domain_error("c2_distance: grid_step must be positive");
  const EnergyDensity A = area_energy();
  const double r = 2.0 * R;
  const int dims = 2 * n;
  const int per_axis = std::max(2, static_cast<int>(std::floor(2.0 * r / grid_step)) + 1);

  Rng rng(12345);
  std::vector<Eigen::VectorXd> starts;
  for (int s = 0; s < 20; ++s) starts.push_back(rng.sphere(dims));

  auto op_norm = [&](const Eigen::MatrixXd& H) {
    double best = 0.0;
    for (const Eigen::VectorXd& v0 : starts) {
      Eigen::VectorXd v = v0;
      double lambda = 0.0;
      for (int it = 0; it < 30; ++it) {
        Eigen::VectorXd w = H * v;
        const double nw = w.norm();
        if (nw < 1e-300) break;
        v = w / nw;
        lambda = std::abs(v.dot(H * v));
      }
      best = std::max(best, lambda);
    }
    return best;
  };

  auto eval_at = [&](const GradientMatrix& X) {
    const double dv = std::abs(f.value(X) - A.value(X));
    const double dg = (f.gradient(X) - A.gradient(X)).norm();
    const double dh = op_norm(f.hessian(X) - A.hessian(X));
    return dv + dg + dh;
  };

  // Cartesian grid over the cube, restricted to the ball, plus each point's
  // radial projection onto the sphere where the sup typically lives.
  long total = 1;
  for (int d = 0; d < dims; ++d) total *= per_axis;
  double best = 0.0;
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    Eigen::VectorXd p(dims);
    for (int d = 0; d < dims; ++d) {
      const int k = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      p[d] = -r + 2.0 * r * k / (per_axis - 1);
    }
    const double norm = p.norm();
    if (norm <= r) best = std::max(best, eval_at(unvec(p)));
    if (norm > 1e-12) best = std::max(best, eval_at(unvec(p * (r / norm))));
  }
  return best;
}

}  // namespace mintool::cvx
