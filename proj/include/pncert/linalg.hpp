#ifndef PNCERT_LINALG_HPP
#define PNCERT_LINALG_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace pncert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

inline double max_abs(const Matrix& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Matrix product with an explicit shape check.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: inner dimensions do not match");
  return a * b;
}

/// Kronecker product. Row index convention (i1*b.rows() + i2), so
/// kron(A,B) * kron(x,y) = kron(A*x, B*y) with |a>|b> amplitudes at
/// flat index i1*d2 + i2.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-10) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  Matrix gram = m.adjoint() * m;
  gram -= Matrix::Identity(m.rows(), m.cols());
  return max_abs(gram) <= tol;
}

}  // namespace pncert

#endif  // PNCERT_LINALG_HPP
