#ifndef PNCERT_NUMERICAL_RANGE_HPP
#define PNCERT_NUMERICAL_RANGE_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "pncert/geometry.hpp"
#include "pncert/matrix_core.hpp"

namespace pncert {

/// H_theta = (e^{-i theta} X + e^{i theta} X^dag) / 2.
inline Matrix rotated_real_part(const Matrix& x, double theta) {
  Complex w = std::polar(1.0, -theta);
  Matrix h = w * x + std::conj(w) * x.adjoint();
  return h / 2.0;
}

/// K_theta = (e^{-i theta} X - e^{i theta} X^dag) / (2i).
inline Matrix rotated_imag_part(const Matrix& x, double theta) {
  Complex w = std::polar(1.0, -theta);
  Matrix k = w * x - std::conj(w) * x.adjoint();
  return k / Complex(0.0, 2.0);
}

struct SupportPoint {
  double lambda_min;
  PureState eigvec;
};

/// Support function of W(X) in direction -e^{i theta}: the smallest
/// eigenvalue of H_theta together with a minimizing unit vector.
inline SupportPoint support_value(const Matrix& x, double theta) {
  if (x.rows() != x.cols())
    throw std::invalid_argument("support_value: matrix is not square");
  HermitianEig eig = eig_hermitian(rotated_real_part(x, theta));
  return {eig.values(0), PureState::normalized(eig.vectors.col(0))};
}

struct NumRangePolygon {
  std::vector<Complex> vertices;  // counterclockwise convex polygon
  int n_angles = 0;
};

/// Boundary of W(X) sampled with n_angles support directions; returns the
/// convex hull of the touch points <v_k|X|v_k>.
inline NumRangePolygon boundary(const Matrix& x, int n_angles = 256) {
  if (n_angles < 16) throw std::invalid_argument("boundary: n_angles must be >= 16");
  std::vector<geom::Point> touch;
  touch.reserve(n_angles);
  for (int k = 0; k < n_angles; ++k) {
    double theta = 2.0 * std::numbers::pi * k / n_angles;
    SupportPoint sp = support_value(x, theta);
    const Vector& v = sp.eigvec.amplitudes();
    touch.push_back(Complex(v.dot(x * v)));
  }
  geom::Hull hull = geom::convex_hull(touch, 1e-10);
  return {hull.vertices, n_angles};
}

struct NumRangeResult {
  double distance = 0.0;
  PureState achiever;
  Complex value;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

inline double lambda_min_only(const Matrix& x, double theta) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rotated_real_part(x, theta),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// Achiever for a strictly positive distance: inside the lambda_min
/// eigenspace of H_theta the rotated real part is fixed at lambda_min, so it
/// remains to zero the rotated imaginary part by mixing extreme eigenvectors
/// of the restricted K.
inline Vector positive_achiever(const Matrix& x, double theta) {
  HermitianEig he = eig_hermitian(rotated_real_part(x, theta));
  double scale = std::max(1.0, std::abs(he.values(he.values.size() - 1)));
  double etol = 1e-8 * scale;
  Eigen::Index width = 1;
  while (width < he.values.size() && he.values(width) - he.values(0) <= etol)
    ++width;
  Matrix block = he.vectors.leftCols(width);
  if (width == 1) return block.col(0);
  Matrix kr = block.adjoint() * rotated_imag_part(x, theta) * block;
  kr = (kr + kr.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> sub(kr);
  double kmin = sub.eigenvalues()(0);
  double kmax = sub.eigenvalues()(width - 1);
  Vector wmin = block * sub.eigenvectors().col(0);
  Vector wmax = block * sub.eigenvectors().col(width - 1);
  if (kmin >= 0.0) return wmin;  // best effort: smallest |<K>|
  if (kmax <= 0.0) return wmax;
  double t = std::atan2(std::sqrt(-kmin), std::sqrt(kmax));
  return std::cos(t) * wmin + std::sin(t) * wmax;
}

/// Attempts a chord construction at angle theta: b = cos t x_i +
/// e^{i phi} sin t x_j with eigenvectors x_i, x_j of H_theta whose
/// eigenvalues straddle zero. Returns a vector with <b|X|b> = 0 when the
/// residual sinusoid in phi admits a root.
inline std::optional<Vector> chord_zero_at(const Matrix& x, double theta) {
  HermitianEig he = eig_hermitian(rotated_real_part(x, theta));
  Matrix k = rotated_imag_part(x, theta);
  const Eigen::Index d = he.values.size();
  double scale = std::max(1.0, max_abs(x));
  double slack = 1e-9 * scale;

  std::optional<Vector> best;
  double best_residual = 1e-8;
  bool done = false;
  auto consider = [&](const Vector& b) {
    double r = std::abs(Complex(b.dot(x * b)));
    if (r < best_residual) {
      best_residual = r;
      best = b;
    }
    if (best_residual <= 1e-13 * scale) done = true;
  };
  for (Eigen::Index i = 0; i < d && !done; ++i) {
    if (he.values(i) > slack) continue;
    for (Eigen::Index j = d; j-- > 0 && !done;) {
      if (i == j || he.values(j) < -slack) continue;
      double li = he.values(i);
      double lj = he.values(j);
      Vector xi = he.vectors.col(i);
      Vector xj = he.vectors.col(j);
      double kii = std::real(Complex(xi.dot(k * xi)));
      double kjj = std::real(Complex(xj.dot(k * xj)));
      Complex kij = xi.dot(k * xj);
      if (std::abs(li) <= slack && std::abs(lj) <= slack) {
        // both chord ends already sit on the support line; the rotated real
        // part is ~0 for every mix, so zero the restricted K spectrally
        Eigen::Matrix2cd k2;
        k2 << kii, kij, std::conj(kij), kjj;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> sub(k2);
        double ka = sub.eigenvalues()(0);
        double kb = sub.eigenvalues()(1);
        if (ka <= 0.0 && kb >= 0.0) {
          double t = std::atan2(std::sqrt(-ka), std::sqrt(kb));
          Eigen::Vector2cd mix = std::cos(t) * sub.eigenvectors().col(0) +
                                 std::sin(t) * sub.eigenvectors().col(1);
          consider(mix(0) * xi + mix(1) * xj);
        }
        continue;
      }
      if (li > 0.0 || lj < 0.0) continue;
      double t = std::atan2(std::sqrt(-li), std::sqrt(lj));
      double c = std::cos(t), s = std::sin(t);
      double cc = c * c * kii + s * s * kjj;
      double denom = 2.0 * c * s;
      double phi;
      if (std::abs(denom) < 1e-14 || std::abs(kij) < 1e-14) {
        if (std::abs(cc) > 1e-10 * scale) continue;
        phi = 0.0;
      } else {
        double r = -cc / denom;
        if (std::abs(r) > std::abs(kij) * (1.0 + 1e-12)) continue;
        phi = -std::arg(kij) + std::acos(std::clamp(r / std::abs(kij), -1.0, 1.0));
      }
      consider(c * xi + std::polar(1.0, phi) * s * xj);
    }
  }
  return best;
}

}  // namespace detail

/// Distance from the origin to W(X):
/// d(0, W(X)) = max(0, max_theta lambda_min(H_theta)), found by a coarse
/// scan over `coarse_angles` directions followed by golden-section
/// refinement. The achiever realizes the reported distance; at distance
/// zero it comes from a chord construction with |<psi|X|psi>| <= 1e-8.
inline NumRangeResult dist_origin(const Matrix& x, int coarse_angles = 360) {
  if (x.rows() != x.cols())
    throw std::invalid_argument("dist_origin: matrix is not square");
  const double two_pi = 2.0 * std::numbers::pi;
  int iterations = coarse_angles;
  double best_theta = 0.0;
  double best_lambda = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < coarse_angles; ++k) {
    double theta = two_pi * k / coarse_angles;
    double lam = detail::lambda_min_only(x, theta);
    if (lam > best_lambda) {
      best_lambda = lam;
      best_theta = theta;
    }
  }
  // golden-section refinement around the coarse maximum
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_theta - two_pi / coarse_angles;
  double b = best_theta + two_pi / coarse_angles;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = detail::lambda_min_only(x, c);
  double fd = detail::lambda_min_only(x, d);
  while (b - a > 1e-10) {
    ++iterations;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = detail::lambda_min_only(x, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = detail::lambda_min_only(x, d);
    }
  }
  double theta_star = (a + b) / 2.0;
  double lambda_star = detail::lambda_min_only(x, theta_star);

  NumRangeResult out{0.0, PureState::normalized(Vector::Ones(x.rows())),
                     Complex(0.0), false, iterations};
  if (lambda_star > 0.0) {
    Vector psi = detail::positive_achiever(x, theta_star);
    out.distance = lambda_star;
    out.achiever = PureState::normalized(psi);
    out.value = Complex(out.achiever.amplitudes().dot(x * out.achiever.amplitudes()));
    out.converged = std::abs(std::abs(out.value) - out.distance) <= 1e-8;
    return out;
  }
  // 0 in W(X): chord construction, theta_star first, then the coarse grid
  std::optional<Vector> best_chord;
  double best_residual = std::numeric_limits<double>::infinity();
  auto try_angle = [&](double theta) {
    std::optional<Vector> cand = detail::chord_zero_at(x, theta);
    if (cand) {
      double r = std::abs(Complex(cand->dot(x * (*cand))));
      if (r < best_residual) {
        best_residual = r;
        best_chord = cand;
      }
    }
    return best_residual <= 1e-10;
  };
  if (!try_angle(theta_star)) {
    for (int k = 0; k < coarse_angles; ++k) {
      ++out.iterations;
      if (try_angle(two_pi * k / coarse_angles)) break;
    }
  }
  if (best_chord) {
    out.achiever = PureState::normalized(*best_chord);
    out.value = Complex(out.achiever.amplitudes().dot(x * out.achiever.amplitudes()));
    out.distance = 0.0;
    out.converged = std::abs(out.value) <= 1e-8;
  }
  return out;
}

/// Distance from the origin to W(U) for unitary U. Exploits normality:
/// W(U) is the convex hull of the eigenvalues, so the distance reduces to
/// exact point-to-polygon geometry and the achiever is a two- or
/// three-eigenvector combination.
inline NumRangeResult v_unitary(const UnitaryMatrix& u) {
  UnitaryEig eig = eig_unitary(u);
  std::vector<geom::Point> pts(eig.phases.size());
  for (Eigen::Index i = 0; i < eig.phases.size(); ++i)
    pts[i] = std::polar(1.0, eig.phases(i));
  geom::Hull hull = geom::convex_hull(pts, 1e-12);
  geom::HullProjection proj = geom::project_to_hull(Complex(0.0), hull);
  Vector psi = Vector::Zero(u.dim());
  for (const auto& [hv, w] : proj.weights) {
    if (w <= 0.0) continue;
    psi += std::sqrt(w) * eig.vectors.col(Eigen::Index(hull.index[hv]));
  }
  PureState achiever = PureState::normalized(psi);
  Complex value = achiever.amplitudes().dot(u.matrix() * achiever.amplitudes());
  bool converged = std::abs(std::abs(value) - proj.distance) <= 1e-8;
  return NumRangeResult{proj.distance, achiever, value, converged, 0};
}

/// True iff the origin belongs to W(X) at the 1e-7 working threshold.
inline bool contains_zero(const Matrix& x) {
  return dist_origin(x).distance <= 1e-7;
}

}  // namespace pncert

#endif  // PNCERT_NUMERICAL_RANGE_HPP
