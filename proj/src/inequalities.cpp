#include "mintool/inequalities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mintool/area.hpp"
#include "mintool/parallel.hpp"
#include "mintool/rng.hpp"

namespace mintool::ineq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-chunk running minimum with its witness pair.
struct Best {
  double gap = kInf;
  GradientMatrix X, Y;
  void consider(double g, const GradientMatrix& x, const GradientMatrix& y) {
    if (g < gap) {
      gap = g;
      X = x;
      Y = y;
    }
  }
};

nlohmann::json pair_witness(const Best& b) {
  if (!std::isfinite(b.gap)) return nullptr;
  return {{"gap", b.gap}, {"X", to_json(b.X)}, {"Y", to_json(b.Y)}};
}

// Draw a pair in the R-ball; two of every five pairs are adversarial
// near-diagonal ones at distance 1e-2 and 1e-4 (all three inequalities
// degenerate as Y -> X, so the diagonal is where violations would hide).
void sample_pair(Rng& rng, int n, double R, long idx, long total, GradientMatrix& X,
                 GradientMatrix& Y) {
  const long mode = idx % 5;
  if (mode == 3 || mode == 4) {
    const double d = (mode == 3) ? 1e-2 : 1e-4;
    X = rng.stratified_ball_matrix(n, std::max(R - d, 0.5 * R), idx, total);
    GradientMatrix U(n, 2);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 2; ++c) U(i, c) = rng.normal();
    U /= std::max(U.norm(), 1e-300);
    Y = X + d * U;
  } else {
    X = rng.stratified_ball_matrix(n, R, idx, total);
    Y = rng.stratified_ball_matrix(n, R, idx, total);
  }
}

std::uint64_t chunk_seed(std::uint64_t seed, long chunk) {
  return seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(chunk + 1));
}

template <typename Fn>
Best reduce_pairs(long samples, std::uint64_t seed, Fn&& gap_of_pair) {
  const long chunk = 4096;
  const long n_chunks = (samples + chunk - 1) / chunk;
  std::vector<Best> locals(n_chunks);
  parallel_chunks(samples, chunk, [&](long c, long begin, long end) {
    Rng rng(chunk_seed(seed, c));
    for (long i = begin; i < end; ++i) gap_of_pair(rng, i, locals[c]);
  });
  Best best;
  for (const Best& b : locals)
    if (b.gap < best.gap) best = b;
  return best;
}

}  // namespace

double delta_of_k(double k) {
  if (k < std::sqrt(2.0) - 1e-12)
    throw std::domain_error("delta_of_k: k must be >= sqrt(2), the minimal |B|");
  const double s = std::max(std::sqrt(2.0) * k, 2.0);
  const double root = 0.5 * (s - std::sqrt(std::max(s * s - 4.0, 0.0)));
  return 0.9 * root;
}

double main_inequality_gap(const GradientMatrix& X, const GradientMatrix& Y, double k,
                           double C) {
  const PlaneMatrix BX = area::field_B(X);
  const PlaneMatrix BY = area::field_B(Y);
  if (BX.norm() > k)
    throw std::domain_error("main_inequality_gap: |B(X)| exceeds k for the first matrix");
  if (BY.norm() > k)
    throw std::domain_error("main_inequality_gap: |B(Y)| exceeds k for the second matrix");
  const GradientMatrix D = X - Y;
  const double first =
      ((area::area_gradient(X) - area::area_gradient(Y)).array() * D.array()).sum();
  const double lhs =
      first + C * (BX - BY).norm() * std::min(X.norm(), Y.norm()) * D.norm();
  return lhs - delta_of_k(k) * D.squaredNorm();
}

ConstantEstimate mu_estimate(double R, int n, long samples, std::uint64_t seed) {
  if (R <= 0.0) throw std::domain_error("mu_estimate: R must be positive");
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    GradientMatrix X, Y;
    sample_pair(rng, n, R, i, samples, X, Y);
    const PlaneMatrix dB = area::field_B(X) - area::field_B(Y);
    const double nb = dB.squaredNorm();
    if (nb < 1e-300) return;  // degenerate X = Y
    b.consider(-dB.determinant() / nb, X, Y);
  });
  if (!std::isfinite(best.gap))
    throw std::runtime_error("mu_estimate: all sampled pairs were degenerate");

  ConstantEstimate e;
  e.name = "mu(R)";
  e.parameter = R;
  e.value = best.gap;
  e.method = "random-search";
  e.samples = samples;
  e.worst_witness = pair_witness(best);
  return e;
}

double pair_det_identity(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() != Y.rows() || X.cols() != 2 || Y.cols() != 2)
    throw std::invalid_argument("pair_det_identity: shapes must match and be m x 2");
  double lhs = 0.0;
  for (int i = 0; i < X.rows(); ++i)
    lhs += X(i, 0) * (-Y(i, 1)) + X(i, 1) * Y(i, 0);  // <X_i, Y_i J>
  double dets = 0.0;
  for (int i = 0; i < X.rows(); ++i) dets += X(i, 0) * Y(i, 1) - X(i, 1) * Y(i, 0);
  return lhs + dets;
}

double det_sum_identity(const PlaneMatrix& M1, const PlaneMatrix& M2) {
  const double lhs = (M1 + M2).determinant();
  const double inner = (M1.array() * cof(M2).transpose().array()).sum();
  return lhs - M1.determinant() - M2.determinant() - inner;
}

double tab_pairing(const Eigen::MatrixXd& Lambda, const Eigen::MatrixXd& Gamma) {
  if (Lambda.rows() != Gamma.rows() || Lambda.cols() != 2 || Gamma.cols() != 2 ||
      Lambda.rows() < 4 || Lambda.rows() % 2 != 0)
    throw std::invalid_argument("tab_pairing: inputs must be matching (2n+2) x 2 matrices");
  const int n = static_cast<int>(Lambda.rows() - 2) / 2;
  const Eigen::MatrixXd D = Lambda - Gamma;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    // t_{i, n+i} = -1: the X-block row pairs with its A-block row.
    sum -= D(i, 0) * D(n + i, 1) - D(i, 1) * D(n + i, 0);
  }
  return sum;
}

RegConstants assemble_reg_constants(double R, double mu) {
  RegConstants rc;
  rc.R = R;
  rc.C = 4.0;
  rc.k = 2.0 * (1.0 + 1.5 * R);
  rc.c = delta_of_k(rc.k);
  rc.tau = 2.0 * rc.c / (3.0 * rc.C * R);
  rc.mu = mu;
  rc.lambda = 3.0 * rc.C * R / (4.0 * rc.tau * mu);
  rc.delta = 0.5 * rc.c;
  return rc;
}

double reg_gap(const GradientMatrix& X, const GradientMatrix& Y, const RegConstants& rc) {
  const double bound = 1.5 * rc.R * (1.0 + 1e-12);
  if (X.norm() > bound || Y.norm() > bound)
    throw std::domain_error("reg_gap: matrices must lie in the (3R/2)-ball");
  const GradientMatrix D = X - Y;
  const double first =
      ((area::area_gradient(X) - area::area_gradient(Y)).array() * D.array()).sum();
  const PlaneMatrix dB = area::field_B(X) - area::field_B(Y);
  return first - rc.lambda * dB.determinant() - rc.delta * D.squaredNorm();
}

InequalityReport reg_inequality_check(double R, int n, long samples, std::uint64_t seed) {
  const ConstantEstimate mu = mu_estimate(1.5 * R, n, std::max<long>(samples / 2, 1000),
                                          chunk_seed(seed, 101));
  const RegConstants rc = assemble_reg_constants(R, mu.value);

  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    GradientMatrix X, Y;
    sample_pair(rng, n, 1.5 * R, i, samples, X, Y);
    b.consider(reg_gap(X, Y, rc), X, Y);
  });

  InequalityReport rep;
  rep.name = "reg_inequality";
  rep.domain_description = "pairs in B_{3R/2}, R=" + std::to_string(R);
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < -1e-9;
  rep.witness = pair_witness(best);
  rep.witness["constants"] = {{"C", rc.C},     {"k", rc.k},   {"c", rc.c},
                              {"tau", rc.tau}, {"mu", rc.mu}, {"lambda", rc.lambda},
                              {"delta", rc.delta}};
  return rep;
}

InequalityReport genf_check(const EnergyDensity& f, double R, int n, long samples,
                            std::uint64_t seed) {
  const ConstantEstimate mu = mu_estimate(1.5 * R, n, std::max<long>(samples / 2, 1000),
                                          chunk_seed(seed, 101));
  const RegConstants rc = assemble_reg_constants(R, mu.value);

  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    GradientMatrix X, Y;
    sample_pair(rng, n, 1.5 * R, i, samples, X, Y);
    const GradientMatrix D = X - Y;
    const double nd = D.squaredNorm();
    if (nd < 1e-300) return;
    const double first = ((f.gradient(X) - f.gradient(Y)).array() * D.array()).sum();
    const PlaneMatrix dB = field_B_f(f, X) - field_B_f(f, Y);
    b.consider((first - rc.lambda * dB.determinant()) / nd, X, Y);
  });

  InequalityReport rep;
  rep.name = "genf:" + f.name;
  rep.domain_description = "pairs in B_{3R/2}, R=" + std::to_string(R);
  rep.n_samples = samples;
  rep.min_gap = best.gap;  // empirical c
  rep.violated = !(best.gap > 0.0);
  rep.witness = pair_witness(best);
  rep.witness["lambda"] = rc.lambda;
  return rep;
}

std::pair<double, double> genf_epsilon_threshold(double R, int n, long samples,
                                                 std::uint64_t seed) {
  const EnergyDensity base = area_energy();
  auto c_of = [&](double eps) {
    const EnergyDensity f = quadratic_shift(base, -eps);
    return genf_check(f, R, n, samples, seed).min_gap;
  };
  double lo = 0.0, hi = 1.0;
  if (c_of(hi) > 0.0) {
    lo = hi;
  } else {
    for (int it = 0; it < 30 && hi - lo > 1e-4; ++it) {
      const double mid = 0.5 * (lo + hi);
      (c_of(mid) > 0.0 ? lo : hi) = mid;
    }
  }
  // Exact C^2 distance of area - eps |X|^2 on B_{2R} for the quadratic family.
  const double c2 = lo * (4.0 * R * R + 4.0 * R + 2.0);
  return {lo, c2};
}

PlaneMatrix m_matrix(const GradientMatrix& X) {
  const BCoefficients c = area::b_coeffs(X);
  PlaneMatrix M;
  M << c.beta, -c.gamma, -c.gamma, c.alpha;
  return M;
}

std::pair<ConstantEstimate, ConstantEstimate> elliptic_coefficient_bounds(
    const std::vector<GradientMatrix>& samples, double R) {
  if (samples.empty())
    throw std::invalid_argument("elliptic_coefficient_bounds: empty sample list");
  double c1 = kInf, c2 = -kInf;
  const GradientMatrix* w1 = nullptr;
  const GradientMatrix* w2 = nullptr;
  for (const GradientMatrix& X : samples) {
    const PlaneMatrix M = m_matrix(X);
    const double tr = M.trace(), det = M.determinant();
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    const double lo = 0.5 * (tr - disc), hi = 0.5 * (tr + disc);
    if (lo < c1) {
      c1 = lo;
      w1 = &X;
    }
    if (hi > c2) {
      c2 = hi;
      w2 = &X;
    }
  }
  ConstantEstimate e1, e2;
  e1.name = "c1";
  e1.parameter = R;
  e1.value = c1;
  e1.method = "grid-search";
  e1.samples = static_cast<long>(samples.size());
  e1.worst_witness = to_json(*w1);
  e2.name = "c2";
  e2.parameter = R;
  e2.value = c2;
  e2.method = "grid-search";
  e2.samples = static_cast<long>(samples.size());
  e2.worst_witness = to_json(*w2);
  return {e1, e2};
}

InequalityReport identities_campaign(long samples, std::uint64_t seed) {
  // Reports min over samples of (1e-12 - relative residual) for the three
  // exact identities; any negative value is a violation.
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    const int n = 1 + static_cast<int>(i % 5);
    const GradientMatrix X = rng.ball_matrix(n, 10.0);
    const GradientMatrix Y = rng.ball_matrix(n, 10.0);

    double q = 0.0;
    for (double d : area::subminor_dets(X)) q += d * d;
    const double cb = q - (X.transpose() * X).determinant();
    const double norm4 = X.squaredNorm() * X.squaredNorm();
    b.consider(1e-12 - std::abs(cb) / (1.0 + norm4), X, Y);

    const double la = pair_det_identity(X, Y);
    b.consider(1e-12 - std::abs(la) / (1.0 + X.norm() * Y.norm()), X, Y);

    PlaneMatrix M1, M2;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        M1(r, c) = rng.uniform(-10.0, 10.0);
        M2(r, c) = rng.uniform(-10.0, 10.0);
      }
    const double ds = det_sum_identity(M1, M2);
    b.consider(1e-12 - std::abs(ds) / (1.0 + M1.norm() * M2.norm() +
                                       M1.squaredNorm() + M2.squaredNorm()),
               GradientMatrix(M1), GradientMatrix(M2));
  });

  InequalityReport rep;
  rep.name = "identities";
  rep.domain_description = "Cauchy-Binet n<=5, row-pair and det-sum identities, |X|<=10";
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < 0.0;
  rep.witness = pair_witness(best);
  return rep;
}

InequalityReport bprops_campaign(long samples, std::uint64_t seed, int max_n, double maxR) {
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    const int n = 1 + static_cast<int>(i % max_n);
    const GradientMatrix X = rng.stratified_ball_matrix(n, maxR, i, samples);
    const PlaneMatrix B = area::field_B(X);
    b.consider(1e-10 - std::abs(B.trace()), X, X);
    b.consider(1e-10 - std::abs(B.determinant() - 1.0), X, X);
    b.consider(-B(0, 1), X, X);  // B12 < 0
    b.consider(B(1, 0), X, X);   // B21 > 0
  });

  InequalityReport rep;
  rep.name = "bprops";
  rep.domain_description = "trace/det/sign structure of B, n<=" + std::to_string(max_n) +
                           ", |X|<=" + std::to_string(maxR);
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < 0.0;
  rep.witness = pair_witness(best);
  return rep;
}

InequalityReport basicest_campaign(long samples, std::uint64_t seed, int max_n, double maxR) {
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    const int n = 1 + static_cast<int>(i % max_n);
    const GradientMatrix X = rng.stratified_ball_matrix(n, maxR, i, samples);
    const double nx = X.norm();
    const double scale = 1.0 + nx * nx;
    const double na = area::field_A(X).norm();
    const double nb = area::field_B(X).norm();
    const double A = area::area_density(X);
    b.consider((2.0 * nx - na) / scale + 1e-10, X, X);
    b.consider((nb - (1.0 + nx * nx) / (2.0 * A)) / scale + 1e-10, X, X);
    b.consider((2.0 * (1.0 + nx) - nb) / scale + 1e-10, X, X);
  });

  InequalityReport rep;
  rep.name = "basicest";
  rep.domain_description = "growth bounds for A and B, n<=" + std::to_string(max_n) +
                           ", |X|<=" + std::to_string(maxR);
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < 0.0;
  rep.witness = pair_witness(best);
  return rep;
}

InequalityReport main_campaign(long samples, std::uint64_t seed, int max_n, double maxR) {
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    const int n = 1 + static_cast<int>(i % max_n);
    GradientMatrix X, Y;
    sample_pair(rng, n, maxR, i, samples, X, Y);
    const double k =
        std::max(area::field_B(X).norm(), area::field_B(Y).norm()) * (1.0 + 1e-14);
    b.consider(main_inequality_gap(X, Y, k), X, Y);
  });

  InequalityReport rep;
  rep.name = "main_inequality";
  rep.domain_description = "pairs with per-pair k, C=4, n<=" + std::to_string(max_n) +
                           ", |X|,|Y|<=" + std::to_string(maxR);
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < -1e-9;
  rep.witness = pair_witness(best);
  return rep;
}

InequalityReport poll_form_campaign(long samples, std::uint64_t seed, double k, int max_n) {
  const double delta = delta_of_k(k);
  const double radius = std::max(k / 2.0 - 1.0, 0.1);  // |B| <= 2(1+|X|) guards the cap
  Best best = reduce_pairs(samples, seed, [&](Rng& rng, long i, Best& b) {
    const int n = 1 + static_cast<int>(i % max_n);
    const GradientMatrix X = rng.stratified_ball_matrix(n, radius, i, samples);
    if (area::field_B(X).norm() > k) return;
    const BCoefficients c = area::b_coeffs(X);
    PlaneMatrix F;
    F << c.beta - delta, -std::abs(c.gamma), -std::abs(c.gamma), c.alpha - delta;
    const double tr = F.trace(), det = F.determinant();
    const double lo = 0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * det, 0.0)));
    b.consider(lo, X, X);
  });

  InequalityReport rep;
  rep.name = "poll_form";
  rep.domain_description = "PSD of the shifted coefficient form at k=" + std::to_string(k);
  rep.n_samples = samples;
  rep.min_gap = best.gap;
  rep.violated = best.gap < -1e-10;
  rep.witness = pair_witness(best);
  return rep;
}

}  // namespace mintool::ineq
