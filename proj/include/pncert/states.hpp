#ifndef PNCERT_STATES_HPP
#define PNCERT_STATES_HPP

#include <optional>
#include <stdexcept>
#include <utility>

#include "pncert/linalg.hpp"

namespace pncert {

/// Unit-norm complex vector. Construction checks | ||psi|| - 1 | <= 1e-12.
class PureState {
 public:
  explicit PureState(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) throw std::invalid_argument("PureState: empty vector");
    double n = amp_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12)
      throw std::invalid_argument("PureState: vector is not normalized");
  }

  /// Normalizes first, then constructs.
  static PureState normalized(const Vector& v) {
    double n = v.norm();
    if (n < 1e-14 || !std::isfinite(n))
      throw std::invalid_argument("PureState::normalized: zero or non-finite vector");
    return PureState(Vector(v / n));
  }

  Eigen::Index dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }

 private:
  Vector amp_;
};

/// Ordered pair (|a>, |b>) on C^{d1} x C^{d2}.
class ProductState {
 public:
  ProductState(PureState a, PureState b) : a_(std::move(a)), b_(std::move(b)) {}

  const PureState& a() const { return a_; }
  const PureState& b() const { return b_; }

  /// Joint amplitudes a_i b_j at flat index i*d2 + j.
  Vector joint() const { return kron(a_.amplitudes(), b_.amplitudes()); }

 private:
  PureState a_;
  PureState b_;
};

using Split = std::pair<Eigen::Index, Eigen::Index>;

/// Square matrix with verified unitarity and an optional bipartite split.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, std::optional<Split> split = std::nullopt)
      : m_(std::move(m)), split_(split) {
    if (m_.rows() != m_.cols())
      throw std::invalid_argument("UnitaryMatrix: matrix is not square");
    if (!all_finite(m_))
      throw std::invalid_argument("UnitaryMatrix: non-finite entries");
    if (!is_unitary(m_))
      throw std::invalid_argument("UnitaryMatrix: U^dag U differs from identity");
    if (split_ && split_->first * split_->second != m_.rows())
      throw std::invalid_argument("UnitaryMatrix: split does not factor the dimension");
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  const std::optional<Split>& split() const { return split_; }

  UnitaryMatrix with_split(Split s) const { return UnitaryMatrix(m_, s); }

 private:
  Matrix m_;
  std::optional<Split> split_;
};

}  // namespace pncert

#endif  // PNCERT_STATES_HPP
