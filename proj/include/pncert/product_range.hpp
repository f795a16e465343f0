#ifndef PNCERT_PRODUCT_RANGE_HPP
#define PNCERT_PRODUCT_RANGE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pncert/numerical_range.hpp"

namespace pncert {

/// M = (<a| (x) I) X (|a> (x) I), the Bob-side compression: <b|M|b> =
/// <a,b|X|a,b> for every b.
inline Matrix compress_left(const Matrix& x, const PureState& a, const Split& split) {
  auto [d1, d2] = split;
  if (x.rows() != x.cols() || x.rows() != d1 * d2 || a.dim() != d1)
    throw std::invalid_argument("compress_left: dimensions inconsistent with split");
  Matrix embed = kron(Matrix(a.amplitudes()), Matrix(Matrix::Identity(d2, d2)));
  return embed.adjoint() * x * embed;
}

/// Alice-side compression: <a|M|a> = <a,b|X|a,b> for every a.
inline Matrix compress_right(const Matrix& x, const PureState& b, const Split& split) {
  auto [d1, d2] = split;
  if (x.rows() != x.cols() || x.rows() != d1 * d2 || b.dim() != d2)
    throw std::invalid_argument("compress_right: dimensions inconsistent with split");
  Matrix embed = kron(Matrix(Matrix::Identity(d1, d1)), Matrix(b.amplitudes()));
  return embed.adjoint() * x * embed;
}

struct PnrResult {
  double distance = 0.0;
  ProductState achiever;
  Complex value;
  int restarts_used = 0;
  std::vector<double> per_restart_history;  // final modulus of each restart
  std::vector<double> best_history;         // objective trace of the best restart
  bool converged = false;
};

struct SeesawOptions {
  int restarts = 20;
  int max_iterations = 500;
  double improvement_tol = 1e-12;
  /// Further restarts are skipped once the best value drops below this;
  /// nothing meaningfully better than zero can be found.
  double zero_bailout = 1e-10;
};

/// Distance from the origin to the product numerical range of X with the
/// given split: alternating optimization, each half-step solving its
/// numerical-range subproblem exactly, restarted from random product states.
inline PnrResult z_distance(const Matrix& x, const Split& split, Rng& rng,
                            const SeesawOptions& opts = {}) {
  auto [d1, d2] = split;
  if (x.rows() != x.cols() || x.rows() != d1 * d2 || d1 < 1 || d2 < 1)
    throw std::invalid_argument("z_distance: invalid split");
  if (opts.restarts < 1) throw std::invalid_argument("z_distance: restarts must be >= 1");

  auto objective = [&](const PureState& a, const PureState& b) {
    Vector ab = kron(a.amplitudes(), b.amplitudes());
    return Complex(ab.dot(x * ab));
  };

  PnrResult best{std::numeric_limits<double>::infinity(),
                 ProductState(PureState::normalized(Vector::Ones(d1)),
                              PureState::normalized(Vector::Ones(d2))),
                 Complex(0.0), 0, {}, {}, false};
  for (int r = 0; r < opts.restarts; ++r) {
    Rng sub = rng.substream(static_cast<std::uint64_t>(r));
    PureState a(sub.random_state_vector(d1));
    PureState b(sub.random_state_vector(d2));
    std::vector<double> history{std::abs(objective(a, b))};
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      b = dist_origin(compress_left(x, a, split)).achiever;
      a = dist_origin(compress_right(x, b, split)).achiever;
      double obj = std::abs(objective(a, b));
      double prev = history.back();
      history.push_back(obj);
      if (prev - obj < opts.improvement_tol) {
        converged = true;
        break;
      }
    }
    best.restarts_used = r + 1;
    double final_obj = history.back();
    best.per_restart_history.push_back(final_obj);
    if (final_obj < best.distance) {
      best.distance = final_obj;
      best.achiever = ProductState(a, b);
      best.value = objective(a, b);
      best.converged = converged;
      best.best_history = std::move(history);
    }
    if (best.distance <= opts.zero_bailout) break;
  }
  return best;
}

struct GridOracleResult {
  double min_modulus = 0.0;
  ProductState argmin;
};

/// Exhaustive grid over product states for split (2,2) or (2,3); the
/// independent cross-check for the seesaw. |a> = (cos ta, e^{i pa} sin ta),
/// |b> analogous (hyperspherical for d2 = 3).
inline GridOracleResult grid_oracle(const Matrix& x, const Split& split, int steps) {
  auto [d1, d2] = split;
  if (d1 != 2 || (d2 != 2 && d2 != 3))
    throw std::invalid_argument("grid_oracle: only splits 2:2 and 2:3 are supported");
  if (steps < 2) throw std::invalid_argument("grid_oracle: steps must be >= 2");
  int bob_params = (d2 == 2) ? 2 : 4;
  double evals = std::pow(static_cast<double>(steps), 2 + bob_params);
  if (evals > 2e8) throw std::invalid_argument("grid_oracle: grid too large");

  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  auto theta_at = [&](int i) { return half_pi * i / (steps - 1); };
  auto phi_at = [&](int i) { return two_pi * i / steps; };

  std::vector<Vector> bobs;
  if (d2 == 2) {
    for (int tb = 0; tb < steps; ++tb)
      for (int pb = 0; pb < steps; ++pb) {
        Vector b(2);
        b << std::cos(theta_at(tb)), std::polar(std::sin(theta_at(tb)), phi_at(pb));
        bobs.push_back(b);
      }
  } else {
    for (int t1 = 0; t1 < steps; ++t1)
      for (int t2 = 0; t2 < steps; ++t2)
        for (int p1 = 0; p1 < steps; ++p1)
          for (int p2 = 0; p2 < steps; ++p2) {
            double c1 = std::cos(theta_at(t1)), s1 = std::sin(theta_at(t1));
            Vector b(3);
            b << c1, std::polar(s1 * std::cos(theta_at(t2)), phi_at(p1)),
                std::polar(s1 * std::sin(theta_at(t2)), phi_at(p2));
            bobs.push_back(b);
          }
  }

  double best = std::numeric_limits<double>::infinity();
  Vector best_a(2), best_b(d2);
  for (int ta = 0; ta < steps; ++ta) {
    for (int pa = 0; pa < steps; ++pa) {
      Vector a(2);
      a << std::cos(theta_at(ta)), std::polar(std::sin(theta_at(ta)), phi_at(pa));
      Matrix m = compress_left(x, PureState(a), split);
      for (const Vector& b : bobs) {
        double val = std::abs(Complex(b.dot(m * b)));
        if (val < best) {
          best = val;
          best_a = a;
          best_b = b;
        }
      }
    }
  }
  return {best, ProductState(PureState::normalized(best_a), PureState::normalized(best_b))};
}

/// z for product unitaries: z(U1 (x) U2) = v(U1) v(U2).
inline double z_product_case(const UnitaryMatrix& u1, const UnitaryMatrix& u2) {
  return v_unitary(u1).distance * v_unitary(u2).distance;
}

namespace detail {

/// min_{p,q in [0,1]} | p q z11 + (1-p) q z21 + p (1-q) z12 + (1-p)(1-q) z22 |.
/// The objective is |linear| in p for fixed q, so the inner search is exact
/// ternary; the outer q search refines around a coarse grid minimum.
inline double min_quadruple(Complex z11, Complex z21, Complex z12, Complex z22) {
  auto value = [&](double p, double q) {
    return std::abs(p * q * z11 + (1.0 - p) * q * z21 + p * (1.0 - q) * z12 +
                    (1.0 - p) * (1.0 - q) * z22);
  };
  auto min_over_p = [&](double q) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      double m1 = lo + (hi - lo) / 3.0;
      double m2 = hi - (hi - lo) / 3.0;
      if (value(m1, q) < value(m2, q))
        hi = m2;
      else
        lo = m1;
    }
    return value((lo + hi) / 2.0, q);
  };
  const int coarse = 65;
  double best_q = 0.0, best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < coarse; ++i) {
    double q = static_cast<double>(i) / (coarse - 1);
    double v = min_over_p(q);
    if (v < best) {
      best = v;
      best_q = q;
    }
  }
  double lo = std::max(0.0, best_q - 1.0 / (coarse - 1));
  double hi = std::min(1.0, best_q + 1.0 / (coarse - 1));
  while (hi - lo > 1e-10) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (min_over_p(m1) < min_over_p(m2))
      hi = m2;
    else
      lo = m1;
  }
  return std::min(best, min_over_p((lo + hi) / 2.0));
}

}  // namespace detail

/// z for diagonal unitaries whose eigenphases fit in a (closed) arc of
/// length pi: the minimum is attained on eigenvalue quadruples
/// D_{i1 j1}, D_{i2 j1}, D_{i1 j2}, D_{i2 j2}.
inline double z_diagonal_quadruples(const Matrix& d, const Split& split) {
  auto [d1, d2] = split;
  const Eigen::Index n = d.rows();
  if (d.cols() != n || n != d1 * d2)
    throw std::invalid_argument("z_diagonal_quadruples: invalid split");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && std::abs(d(i, j)) > 1e-12)
        throw std::invalid_argument("z_diagonal_quadruples: matrix is not diagonal");
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(std::abs(d(i, i)) - 1.0) > 1e-10)
      throw std::invalid_argument("z_diagonal_quadruples: diagonal is not unimodular");

  // arc condition: all eigenphases inside a closed arc of length pi, i.e.
  // the largest circular gap between consecutive phases is >= pi
  std::vector<double> phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases[i] = std::arg(d(i, i));
  std::sort(phases.begin(), phases.end());
  double max_gap = phases.front() + 2.0 * std::numbers::pi - phases.back();
  for (std::size_t i = 1; i < phases.size(); ++i)
    max_gap = std::max(max_gap, phases[i] - phases[i - 1]);
  if (max_gap < std::numbers::pi - 1e-9)
    throw std::domain_error(
        "z_diagonal_quadruples: eigenphases are not contained in an arc of length pi");

  auto entry = [&](Eigen::Index i, Eigen::Index j) { return d(i * d2 + j, i * d2 + j); };
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i1 = 0; i1 < d1; ++i1)
    for (Eigen::Index i2 = i1; i2 < d1; ++i2)
      for (Eigen::Index j1 = 0; j1 < d2; ++j1)
        for (Eigen::Index j2 = j1; j2 < d2; ++j2)
          best = std::min(best,
                          detail::min_quadruple(entry(i1, j1), entry(i2, j1),
                                                entry(i1, j2), entry(i2, j2)));
  return best;
}

/// |tr X| / (d1 d2): the spectrum barycenter always lies in the product
/// numerical range, so this upper-bounds z.
inline double trace_upper_bound(const Matrix& x, const Split& split) {
  auto [d1, d2] = split;
  if (x.rows() != x.cols() || x.rows() != d1 * d2)
    throw std::invalid_argument("trace_upper_bound: invalid split");
  return std::abs(Complex(x.trace())) / static_cast<double>(d1 * d2);
}

struct ShadowSampleSet {
  std::vector<Complex> samples;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Split split{0, 0};
};

/// Monte Carlo shadow: n samples <a,b|X|a,b> with independent Haar-random
/// pure product states.
inline ShadowSampleSet shadow_sample(const Matrix& x, const Split& split,
                                     std::size_t n, Rng& rng) {
  auto [d1, d2] = split;
  if (x.rows() != x.cols() || x.rows() != d1 * d2)
    throw std::invalid_argument("shadow_sample: invalid split");
  ShadowSampleSet out;
  out.n = n;
  out.seed = rng.seed();
  out.split = split;
  out.samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng sub = rng.substream(i);
    Vector a = sub.random_state_vector(d1);
    Vector b = sub.random_state_vector(d2);
    Vector ab = kron(a, b);
    out.samples.push_back(Complex(ab.dot(x * ab)));
  }
  return out;
}

struct ZeroFractionStudy {
  double fraction = 0.0;
  std::vector<double> per_trial;
  Split split{0, 0};
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

/// Empirical probability that z vanishes for Haar-random unitaries of size
/// d1*d2 (z declared zero at 1e-6).
inline ZeroFractionStudy zero_fraction_study(Eigen::Index d1, Eigen::Index d2,
                                             std::size_t trials, Rng& rng,
                                             int restarts = 20) {
  if (trials < 1) throw std::invalid_argument("zero_fraction_study: trials must be >= 1");
  ZeroFractionStudy out;
  out.split = {d1, d2};
  out.trials = trials;
  out.seed = rng.seed();
  std::size_t zeros = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng sub = rng.substream(t);
    if (d1 == 1 && d2 == 1) {
      // W of a phase is the phase itself; never zero
      UnitaryMatrix u = haar_unitary(1, sub);
      out.per_trial.push_back(std::abs(u.matrix()(0, 0)));
      continue;
    }
    UnitaryMatrix u = haar_unitary(d1 * d2, sub, Split{d1, d2});
    SeesawOptions opts;
    opts.restarts = std::max(restarts, 20);
    Rng seesaw_rng = sub.substream(1u << 20);
    PnrResult z = z_distance(u.matrix(), {d1, d2}, seesaw_rng, opts);
    out.per_trial.push_back(z.distance);
    if (z.distance <= 1e-6) ++zeros;
  }
  out.fraction = static_cast<double>(zeros) / static_cast<double>(trials);
  return out;
}

}  // namespace pncert

#endif  // PNCERT_PRODUCT_RANGE_HPP
