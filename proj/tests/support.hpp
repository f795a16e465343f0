#ifndef PNCERT_TESTS_SUPPORT_HPP
#define PNCERT_TESTS_SUPPORT_HPP

#include <vector>

#include "pncert/matrix_core.hpp"

namespace pncert::testing {

/// Independent O(n^3) triple-loop product, the oracle for multiply().
Matrix naive_multiply(const Matrix& a, const Matrix& b);

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

Matrix random_hermitian(Eigen::Index n, Rng& rng);

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

}  // namespace pncert::testing

#endif
