#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

namespace mintool {

// Deterministic, platform-independent generator (xoshiro256** seeded by
// splitmix64). std:: distributions are implementation-defined, which would
// break byte-identical reports across toolchains, so sampling is hand-rolled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; one value per call keeps the stream simple to reason about.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd sphere(int dim) {
    Eigen::VectorXd v(dim);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-300);
    return v / std::sqrt(norm2);
  }

  // Uniform over the Frobenius ball of radius R in R^{n x 2}.
  Eigen::Matrix<double, Eigen::Dynamic, 2> ball_matrix(int n, double R) {
    const Eigen::VectorXd dir = sphere(2 * n);
    const double r = R * std::pow(uniform(), 1.0 / (2.0 * n));
    Eigen::Matrix<double, Eigen::Dynamic, 2> X(n, 2);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = r * dir[2 * i];
      X(i, 1) = r * dir[2 * i + 1];
    }
    return X;
  }

  // Stratified radius: sample index k pins r into [k/m, (k+1)/m) * R.
  Eigen::Matrix<double, Eigen::Dynamic, 2> stratified_ball_matrix(int n, double R,
                                                                  long index, long total) {
    const long strata = 16;
    const long k = (index * strata) / std::max<long>(total, 1);
    const double lo = static_cast<double>(k) / strata;
    const double hi = static_cast<double>(k + 1) / strata;
    const Eigen::VectorXd dir = sphere(2 * n);
    const double r = R * uniform(lo, std::min(hi, 1.0));
    Eigen::Matrix<double, Eigen::Dynamic, 2> X(n, 2);
    for (int i = 0; i < n; ++i) {
      X(i, 0) = r * dir[2 * i];
      X(i, 1) = r * dir[2 * i + 1];
    }
    return X;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace mintool
