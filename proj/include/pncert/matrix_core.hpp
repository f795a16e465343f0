#ifndef PNCERT_MATRIX_CORE_HPP
#define PNCERT_MATRIX_CORE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pncert/linalg.hpp"
#include "pncert/rng.hpp"
#include "pncert/states.hpp"

namespace pncert {

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns
};

inline HermitianEig eig_hermitian(const Matrix& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct UnitaryEig {
  Eigen::VectorXd phases;  // principal values in (-pi, pi], ascending
  Matrix vectors;          // orthonormal columns
};

/// Eigendecomposition of a unitary matrix via the Hermitian problem for
/// H = (U+U^dag)/2; degeneracies of H (eigenvalues e^{i phi}, e^{-i phi}
/// share cos phi) are resolved by diagonalizing the restriction of
/// K = (U-U^dag)/(2i) inside each H-eigenspace.
inline UnitaryEig eig_unitary(const UnitaryMatrix& u) {
  const Matrix& m = u.matrix();
  const Eigen::Index d = m.rows();
  Matrix h = (m + m.adjoint()) / 2.0;
  Matrix k = (m - m.adjoint()) / Complex(0.0, 2.0);
  HermitianEig he = eig_hermitian(h);

  Matrix vecs(d, d);
  Eigen::VectorXd phases(d);
  const double group_tol = 1e-8;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index stop = start + 1;
    while (stop < d && he.values(stop) - he.values(stop - 1) <= group_tol) ++stop;
    Eigen::Index width = stop - start;
    Matrix block = he.vectors.middleCols(start, width);
    if (width == 1) {
      vecs.col(start) = block.col(0);
    } else {
      Matrix kr = block.adjoint() * k * block;
      kr = (kr + kr.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Matrix> sub(kr);
      vecs.middleCols(start, width) = block * sub.eigenvectors();
    }
    start = stop;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    Vector v = vecs.col(i);
    Complex lambda = v.dot(m * v);
    double phi = std::atan2(lambda.imag(), lambda.real());
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    phases(i) = phi;
  }
  // sort ascending by phase
  std::vector<Eigen::Index> order(d);
  for (Eigen::Index i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return phases(a) < phases(b); });
  UnitaryEig out{Eigen::VectorXd(d), Matrix(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    out.phases(i) = phases(order[i]);
    out.vectors.col(i) = vecs.col(order[i]);
  }
  return out;
}

/// U^alpha through the principal-branch eigenphases, alpha in [0,1].
inline UnitaryMatrix unitary_power(const UnitaryMatrix& u, double alpha) {
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("unitary_power: alpha outside [0,1]");
  UnitaryEig eig = eig_unitary(u);
  Vector d(eig.phases.size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d(i) = std::polar(1.0, alpha * eig.phases(i));
  Matrix out = eig.vectors * d.asDiagonal() * eig.vectors.adjoint();
  return UnitaryMatrix(out, u.split());
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phase correction Q -> Q diag(r_kk/|r_kk|).
inline UnitaryMatrix haar_unitary(Eigen::Index dim, Rng& rng,
                                  std::optional<Split> split = std::nullopt) {
  if (dim < 1) throw std::invalid_argument("haar_unitary: dim must be positive");
  Matrix g = rng.ginibre(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    Complex rd = r(i, i);
    Complex phase = std::abs(rd) > 0 ? rd / std::abs(rd) : Complex(1.0, 0.0);
    q.col(i) *= phase;
  }
  return UnitaryMatrix(q, split);
}

/// The reflection I_{d^2} - (2/d)|I_d><I_d| with |I_d> = sum_i |i,i>
/// (unnormalized); eigenvalues are +-1, split (d, d).
inline UnitaryMatrix reflection_example(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("reflection_example: d must be >= 2");
  Vector id_vec = Vector::Zero(d * d);
  for (Eigen::Index i = 0; i < d; ++i) id_vec(i * d + i) = 1.0;
  Matrix m = Matrix::Identity(d * d, d * d) -
             (2.0 / static_cast<double>(d)) * (id_vec * id_vec.adjoint());
  return UnitaryMatrix(m, Split{d, d});
}

/// T_alpha = (U (x) V)^{1-alpha} (I - 2|psi><psi|)^alpha with
/// |psi> = |I_d>/sqrt(d); interpolates between a product unitary and the
/// maximally entangled reflection.
inline UnitaryMatrix t_alpha_family(const UnitaryMatrix& u, const UnitaryMatrix& v,
                                    double alpha) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("t_alpha_family: U and V must have equal dimension");
  const Eigen::Index d = u.dim();
  UnitaryMatrix product(kron(u.matrix(), v.matrix()), Split{d, d});
  UnitaryMatrix reflection = reflection_example(d);
  Matrix t = unitary_power(product, 1.0 - alpha).matrix() *
             unitary_power(reflection, alpha).matrix();
  return UnitaryMatrix(t, Split{d, d});
}

}  // namespace pncert

#endif  // PNCERT_MATRIX_CORE_HPP
