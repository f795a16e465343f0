#include "support.hpp"

#include <algorithm>

namespace pncert::testing {

Matrix naive_multiply(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j)
      for (Eigen::Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return rng.ginibre(rows, cols);
}

Matrix random_hermitian(Eigen::Index n, Rng& rng) {
  Matrix g = rng.ginibre(n, n);
  return (g + g.adjoint()) / 2.0;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double stat = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    stat = std::max(stat, std::abs(fa - fb));
  }
  return stat;
}

}  // namespace pncert::testing
