#ifndef PNCERT_RNG_HPP
#define PNCERT_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace pncert {

/// Seedable, splittable random stream. Substreams are derived from the
/// master seed and an index, so parallel loops can draw independently
/// while staying reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng substream(std::uint64_t index) const {
    // splitmix64 finalizer applied to (seed, index) pair
    std::uint64_t x = seed_ + 0x9e3779b97f4a7c15ULL * (index + 1);
    return Rng(splitmix(x));
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }

  Eigen::VectorXcd complex_normal_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

  Eigen::MatrixXcd ginibre(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXcd g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = complex_normal();
    return g;
  }

  /// Haar-random pure state amplitudes (normalized complex Gaussian vector).
  Eigen::VectorXcd random_state_vector(Eigen::Index n) {
    Eigen::VectorXcd v = complex_normal_vector(n);
    double nrm = v.norm();
    while (nrm < 1e-12) {  // astronomically unlikely, but keep the contract
      v = complex_normal_vector(n);
      nrm = v.norm();
    }
    return v / nrm;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pncert

#endif  // PNCERT_RNG_HPP
