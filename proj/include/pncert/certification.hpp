#ifndef PNCERT_CERTIFICATION_HPP
#define PNCERT_CERTIFICATION_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pncert/product_range.hpp"

namespace pncert {

/// A certification instance: hypotheses Psi_U (H0) vs Psi_V (H1) at
/// significance level delta.
struct CertificationProblem {
  UnitaryMatrix u;
  UnitaryMatrix v;
  double delta = 0.0;

  CertificationProblem(UnitaryMatrix u_, UnitaryMatrix v_, double delta_)
      : u(std::move(u_)), v(std::move(v_)), delta(delta_) {
    if (u.dim() != v.dim())
      throw std::invalid_argument("CertificationProblem: U and V dimensions differ");
    if (u.split() != v.split())
      throw std::invalid_argument("CertificationProblem: U and V splits differ");
    if (delta < 0.0 || delta > 1.0)
      throw std::invalid_argument("CertificationProblem: delta outside [0,1]");
  }

  Split split() const {
    if (u.split()) return *u.split();
    return {1, u.dim()};
  }
};

/// Type-II error of the most powerful test as a function of the distance
/// (z or v) and the significance level: 0 when dist <= sqrt(delta), else
/// (dist sqrt(1-delta) - sqrt(1-dist^2) sqrt(delta))^2.
inline double pii_from_distance(double dist, double delta) {
  if (dist < -1e-12 || dist > 1.0 + 1e-12)
    throw std::invalid_argument("pii_from_distance: dist outside [0,1]");
  if (delta < -1e-12 || delta > 1.0 + 1e-12)
    throw std::invalid_argument("pii_from_distance: delta outside [0,1]");
  dist = std::clamp(dist, 0.0, 1.0);
  delta = std::clamp(delta, 0.0, 1.0);
  // sqrt(1 - dist^2) amplifies rounding noise near dist = 1 (an error of
  // 1e-16 in dist becomes ~1e-8 in the result), so snap to the endpoint
  if (dist > 1.0 - 1e-13) dist = 1.0;
  if (dist <= std::sqrt(delta)) return 0.0;
  double amp = dist * std::sqrt(1.0 - delta) - std::sqrt(1.0 - dist * dist) * std::sqrt(delta);
  return amp * amp;
}

enum class CertMode { local, global };
enum class CertBranch { orthogonal, tilted };

struct CertificationPlan {
  double z_or_v = 0.0;
  CertMode mode = CertMode::local;
  CertBranch branch = CertBranch::orthogonal;
  double p2_predicted = 0.0;
  PureState input;                          // joint input state
  std::optional<ProductState> input_product;  // present in local mode
  PureState h0;
  PureState h1;
  PureState omega;
  std::optional<PureState> omega_perp;
  bool converged = true;
};

namespace detail {

inline Vector some_orthogonal_unit(const Vector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    Vector e = Vector::Zero(v.size());
    e(k) = 1.0;
    Vector cand = e - v * v.dot(e);
    if (cand.norm() > 0.5) return cand / cand.norm();
  }
  throw std::runtime_error("some_orthogonal_unit: no candidate found");
}

/// Builds the acceptance state omega (and its orthocomplement inside
/// span{h0, h1}) for the pair of channel outputs, following the two-state
/// certification construction.
inline void build_omega(CertificationPlan& plan, double delta) {
  const Vector& h0 = plan.h0.amplitudes();
  const Vector& h1 = plan.h1.amplitudes();
  Complex x = h0.dot(h1);  // <h0|h1>
  double ax = std::abs(x);
  if (plan.branch == CertBranch::orthogonal) {
    Vector omega_t = h0 - h1 * h1.dot(h0);
    Vector omega = omega_t.norm() > 1e-12 ? Vector(omega_t / omega_t.norm())
                                          : some_orthogonal_unit(h1);
    plan.omega = PureState::normalized(omega);
    // reject direction: h1 itself (inside span{h0,h1}, orthogonal to omega)
    Vector perp = h1 - omega * omega.dot(h1);
    plan.omega_perp = perp.norm() > 1e-12 ? PureState::normalized(perp)
                                          : PureState(plan.h1);
  } else {
    Vector h0p_t = h1 - x * h0;
    Vector h0p = h0p_t.norm() > 1e-12 ? Vector(h0p_t / h0p_t.norm())
                                      : some_orthogonal_unit(h0);
    Complex phase = ax > 1e-14 ? x / ax : Complex(1.0, 0.0);
    double sd = std::sqrt(delta), cd = std::sqrt(1.0 - delta);
    Vector omega = cd * phase * h0 - sd * h0p;
    Vector omega_perp = sd * h0 + cd * std::conj(phase) * h0p;
    plan.omega = PureState::normalized(omega);
    plan.omega_perp = PureState::normalized(omega_perp);
  }
}

}  // namespace detail

/// Optimal LOCC certification plan: the input product state minimizes
/// |<a,b|V^dag U|a,b>| (seesaw), and the acceptance state omega realizes
/// the optimal two-state error formula with z that minimum.
inline CertificationPlan certify_local(const CertificationProblem& problem, Rng& rng,
                                       const SeesawOptions& opts = {}) {
  Split split = problem.split();
  Matrix vdu = problem.v.matrix().adjoint() * problem.u.matrix();
  PnrResult z = z_distance(vdu, split, rng, opts);
  Vector joint = z.achiever.joint();
  PureState h0 = PureState::normalized(problem.u.matrix() * joint);
  PureState h1 = PureState::normalized(problem.v.matrix() * joint);
  CertificationPlan plan{z.distance,
                         CertMode::local,
                         z.distance <= std::sqrt(problem.delta) + 1e-9
                             ? CertBranch::orthogonal
                             : CertBranch::tilted,
                         pii_from_distance(z.distance, problem.delta),
                         PureState::normalized(joint),
                         z.achiever,
                         h0,
                         h1,
                         h0,  // placeholder, overwritten below
                         std::nullopt,
                         z.converged};
  detail::build_omega(plan, problem.delta);
  return plan;
}

/// Optimal unrestricted (single-party) plan: same construction with the
/// possibly entangled achiever of the plain numerical range.
inline CertificationPlan certify_global(const CertificationProblem& problem) {
  Matrix vdu = problem.v.matrix().adjoint() * problem.u.matrix();
  NumRangeResult v = dist_origin(vdu);
  const Vector& psi = v.achiever.amplitudes();
  PureState h0 = PureState::normalized(problem.u.matrix() * psi);
  PureState h1 = PureState::normalized(problem.v.matrix() * psi);
  CertificationPlan plan{v.distance,
                         CertMode::global,
                         v.distance <= std::sqrt(problem.delta) + 1e-9
                             ? CertBranch::orthogonal
                             : CertBranch::tilted,
                         pii_from_distance(v.distance, problem.delta),
                         v.achiever,
                         std::nullopt,
                         h0,
                         h1,
                         h0,  // placeholder, overwritten below
                         std::nullopt,
                         v.converged};
  detail::build_omega(plan, problem.delta);
  return plan;
}

/// One-way LOCC measurement distinguishing two orthogonal bipartite pure
/// states: Alice's basis makes the Bob-side conditional components of the
/// two states orthogonal outcome by outcome.
struct OneWayProtocol {
  std::vector<PureState> alice_basis;        // dim d1, orthonormal
  std::vector<PureState> bob_reject_dirs;    // per Alice outcome, the nu_i direction
  std::vector<double> bob_reject_strengths;  // ||nu_i|| (diagnostic)
  double residual = 0.0;                     // sum_i |<eta_i|nu_i>|^2
  Split split{0, 0};

  /// Induced acceptance effect Omega_0 = sum_i |a_i><a_i| (x) (I - |nu_i><nu_i|).
  Matrix acceptance_effect() const {
    auto [d1, d2] = split;
    Matrix out = Matrix::Zero(d1 * d2, d1 * d2);
    for (Eigen::Index i = 0; i < d1; ++i) {
      const Vector& a = alice_basis[i].amplitudes();
      const Vector& nu = bob_reject_dirs[i].amplitudes();
      Matrix bob = Matrix::Identity(d2, d2) - nu * nu.adjoint();
      out += kron(Matrix(a * a.adjoint()), bob);
    }
    return out;
  }
};

class ProtocolSearchError : public std::runtime_error {
 public:
  ProtocolSearchError(const std::string& msg, double best_residual)
      : std::runtime_error(msg), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

namespace detail {

/// Reshape a bipartite vector into the d1 x d2 coefficient matrix
/// (rows: Alice index).
inline Matrix reshape_bipartite(const Vector& v, const Split& split) {
  auto [d1, d2] = split;
  Matrix out(d1, d2);
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index j = 0; j < d2; ++j) out(i, j) = v(i * d2 + j);
  return out;
}

/// Orthonormal basis whose diagonal for the (traceless) matrix m vanishes:
/// repeatedly take a numerical-range zero achiever and deflate to its
/// orthocomplement.
inline std::vector<Vector> zero_diagonal_basis(const Matrix& m) {
  const Eigen::Index d = m.rows();
  std::vector<Vector> basis;
  Matrix current = m;
  Matrix embed = Matrix::Identity(d, d);  // maps current coordinates to C^d
  for (Eigen::Index k = d; k > 1; --k) {
    NumRangeResult nr = dist_origin(current);
    Vector xloc = nr.achiever.amplitudes();
    basis.push_back(embed * xloc);
    // orthocomplement of xloc inside the current space via Householder
    Eigen::HouseholderQR<Matrix> qr((Matrix(xloc)));
    Matrix q = qr.householderQ();
    Matrix rest = q.rightCols(k - 1);
    current = rest.adjoint() * current * rest;
    embed = embed * rest;
  }
  basis.push_back(embed.col(0));
  return basis;
}

}  // namespace detail

/// Realizes the one-way protocol for an orthogonal pair (omega, omega_perp):
/// find an Alice basis with biorthogonal Bob-side conditionals, retrying
/// from random rotations if the residual is above threshold.
inline OneWayProtocol one_way_protocol(const PureState& omega,
                                       const PureState& omega_perp, const Split& split,
                                       Rng& rng, int retry_budget = 10) {
  auto [d1, d2] = split;
  if (omega.dim() != d1 * d2 || omega_perp.dim() != d1 * d2)
    throw std::invalid_argument("one_way_protocol: dimensions inconsistent with split");
  Complex overlap = omega.amplitudes().dot(omega_perp.amplitudes());
  if (std::abs(overlap) > 1e-8)
    throw std::invalid_argument("one_way_protocol: states are not orthogonal");

  Matrix w = detail::reshape_bipartite(omega.amplitudes(), split);
  Matrix nmat = detail::reshape_bipartite(omega_perp.amplitudes(), split);
  Matrix m = w * nmat.adjoint();  // d1 x d1, trace = <omega_perp|omega> ~ 0

  double best_residual = std::numeric_limits<double>::infinity();
  std::optional<OneWayProtocol> best;
  for (int attempt = 0; attempt <= retry_budget; ++attempt) {
    Matrix g = Matrix::Identity(d1, d1);
    if (attempt > 0) {
      Rng sub = rng.substream(static_cast<std::uint64_t>(attempt));
      g = haar_unitary(d1, sub).matrix();
    }
    Matrix mg = g.adjoint() * m * g;
    std::vector<Vector> basis_g = detail::zero_diagonal_basis(mg);

    OneWayProtocol proto;
    proto.split = split;
    double residual = 0.0;
    for (const Vector& bg : basis_g) {
      Vector a = g * bg;
      Vector eta = w.transpose() * a.conjugate();   // eta_i = (<a_i| (x) I) omega
      Vector nu = nmat.transpose() * a.conjugate();
      residual += std::norm(Complex(eta.dot(nu)));
      Vector nu_dir = nu.norm() > 1e-12 ? Vector(nu / nu.norm())
                                        : Vector(Vector::Unit(d2, 0));
      proto.alice_basis.push_back(PureState::normalized(a));
      proto.bob_reject_dirs.push_back(PureState::normalized(nu_dir));
      proto.bob_reject_strengths.push_back(nu.norm());
    }
    proto.residual = residual;
    if (residual < best_residual) {
      best_residual = residual;
      best = std::move(proto);
    }
    if (best_residual <= 1e-9) return *best;
  }
  throw ProtocolSearchError("one_way_protocol: biorthogonality residual " +
                                std::to_string(best_residual) + " above 1e-9",
                            best_residual);
}

struct ProtocolTranscript {
  std::size_t shots = 0;
  // counts[channel][decision]: channel 0 = U, 1 = V; decision 0 = accept H0,
  // 1 = reject
  std::array<std::array<std::size_t, 2>, 2> counts{{{0, 0}, {0, 0}}};
  double p1_hat = 0.0;   // P(reject | U)
  double p2_hat = 0.0;   // P(accept | V)
};

/// Monte Carlo run of the one-way protocol: sample Alice's outcome with
/// Born probabilities, then Bob's conditional two-outcome measurement;
/// "Bob outcome orthogonal to nu_i" accepts H0.
inline ProtocolTranscript simulate_protocol(const CertificationProblem& problem,
                                            const CertificationPlan& plan,
                                            const OneWayProtocol& protocol,
                                            std::size_t shots, Rng& rng) {
  if (plan.mode != CertMode::local)
    throw std::invalid_argument("simulate_protocol: protocol simulation needs a local plan");
  auto [d1, d2] = protocol.split;
  ProtocolTranscript out;
  out.shots = shots;
  const Vector input = plan.input.amplitudes();
  for (int channel = 0; channel < 2; ++channel) {
    const Matrix& t = (channel == 0) ? problem.u.matrix() : problem.v.matrix();
    Vector psi = t * input;
    // per Alice outcome: probability and Bob's conditional reject probability
    std::vector<double> p_alice(d1), p_reject(d1);
    Matrix coeff = detail::reshape_bipartite(psi, protocol.split);
    for (Eigen::Index i = 0; i < d1; ++i) {
      Vector eta = coeff.transpose() * protocol.alice_basis[i].amplitudes().conjugate();
      double pi = eta.squaredNorm();
      p_alice[i] = pi;
      if (pi > 1e-30) {
        Vector cond = eta / eta.norm();
        p_reject[i] =
            std::norm(Complex(protocol.bob_reject_dirs[i].amplitudes().dot(cond)));
      } else {
        p_reject[i] = 0.0;
      }
    }
    Rng sub = rng.substream(static_cast<std::uint64_t>(channel));
    for (std::size_t s = 0; s < shots; ++s) {
      double u = sub.uniform();
      Eigen::Index i = 0;
      double acc = 0.0;
      for (; i < d1 - 1; ++i) {
        acc += p_alice[i];
        if (u < acc) break;
      }
      bool reject = sub.uniform() < p_reject[i];
      ++out.counts[channel][reject ? 1 : 0];
    }
  }
  out.p1_hat = static_cast<double>(out.counts[0][1]) / static_cast<double>(shots);
  out.p2_hat = static_cast<double>(out.counts[1][0]) / static_cast<double>(shots);
  return out;
}

struct MeasurementBound {
  double bound = 0.0;
  Eigen::VectorXd e_phases;
  Eigen::VectorXd f_phases;
  int evaluations = 0;
};

/// Lower bound on the type-II error for von Neumann measurement
/// certification: maximize p_II(UE, VF) over diagonal unitaries E, F via
/// heuristic starts plus coordinate-wise refinement on the phases.
inline MeasurementBound measurement_lower_bound(const UnitaryMatrix& u,
                                                const UnitaryMatrix& v, double delta,
                                                int phase_search_budget, Rng& rng) {
  if (u.dim() != v.dim())
    throw std::invalid_argument("measurement_lower_bound: dimensions differ");
  const Eigen::Index d = u.dim();
  Split split = u.split() ? *u.split() : Split{1, d};
  MeasurementBound best;
  best.e_phases = Eigen::VectorXd::Zero(d);
  best.f_phases = Eigen::VectorXd::Zero(d);
  if (delta >= 1.0) return best;  // the error formula vanishes identically

  SeesawOptions inner;
  inner.restarts = 6;
  auto evaluate = [&](const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
    Vector ediag(d), fdiag(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      ediag(i) = std::polar(1.0, e(i));
      fdiag(i) = std::polar(1.0, f(i));
    }
    Matrix ue = u.matrix() * ediag.asDiagonal();
    Matrix vf = v.matrix() * fdiag.asDiagonal();
    CertificationProblem p(UnitaryMatrix(ue, split), UnitaryMatrix(vf, split), delta);
    Rng sub = rng.substream(static_cast<std::uint64_t>(best.evaluations));
    ++best.evaluations;
    return certify_local(p, sub, inner).p2_predicted;
  };
  auto consider = [&](const Eigen::VectorXd& e, const Eigen::VectorXd& f) {
    double val = evaluate(e, f);
    if (val > best.bound) {
      best.bound = val;
      best.e_phases = e;
      best.f_phases = f;
    }
    return best.bound >= 1.0 - delta - 1e-12;  // cannot be beaten
  };

  // starts: identity, the diagonal-compensating heuristic, random draws
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> starts;
  starts.emplace_back(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Zero(d));
  {
    Eigen::VectorXd e(d), f(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      e(i) = -std::arg(u.matrix()(i, i) + Complex(1e-300, 0.0));
      f(i) = -std::arg(v.matrix()(i, i) + Complex(1e-300, 0.0));
    }
    starts.emplace_back(e, f);
  }
  Rng start_rng = rng.substream(0xabcdef);
  for (int s = 0; s < 4; ++s) {
    Eigen::VectorXd e(d), f(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      e(i) = start_rng.uniform(-std::numbers::pi, std::numbers::pi);
      f(i) = start_rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    starts.emplace_back(e, f);
  }

  for (auto& [e0, f0] : starts) {
    if (best.evaluations >= phase_search_budget) break;
    if (consider(e0, f0)) return best;
    Eigen::VectorXd e = e0, f = f0;
    double current = evaluate(e, f);
    double step = std::numbers::pi / 4.0;
    while (step > std::numbers::pi / 64.0 && best.evaluations < phase_search_budget) {
      bool improved = false;
      for (Eigen::Index coord = 0; coord < 2 * d; ++coord) {
        Eigen::VectorXd& target = coord < d ? e : f;
        Eigen::Index idx = coord % d;
        double base = target(idx);
        for (double offset : {-step, step}) {
          target(idx) = base + offset;
          double val = evaluate(e, f);
          if (val > current + 1e-12) {
            current = val;
            base = target(idx);
            improved = true;
          } else {
            target(idx) = base;
          }
          if (best.evaluations >= phase_search_budget) break;
        }
        if (current > best.bound) {
          best.bound = current;
          best.e_phases = e;
          best.f_phases = f;
          if (best.bound >= 1.0 - delta - 1e-12) return best;
        }
        if (best.evaluations >= phase_search_budget) break;
      }
      if (!improved) step /= 2.0;
    }
  }
  return best;
}

}  // namespace pncert

#endif  // PNCERT_CERTIFICATION_HPP
