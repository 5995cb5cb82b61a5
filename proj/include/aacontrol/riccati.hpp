#ifndef AACONTROL_RICCATI_HPP
#define AACONTROL_RICCATI_HPP

// Algebraic Riccati equations
//   degenerate:  A'P + PA - P B B' P = 0
//   standard:    A'P + PA - P B B' P + M'M = 0
//
// The degenerate equation is solved in closed form: with W the
// controllability Gramian of (-A, B), i.e. A W + W A' = B B', the matrix
// P = W^{-1} satisfies it (multiply the equation by P^{-1} on both sides).
// Of the two solutions P = 0 and P = W^{-1}, only the invertible one is
// returned. A Newton-Kleinman iteration started from an independent
// stabilizing gain, run in extended precision, serves as the cross-check, and also solves the standard
// equation starting from the degenerate solution.

#include "aacontrol/config.hpp"
#include "aacontrol/linalg.hpp"
#include "aacontrol/spectral.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace aac {

enum class RiccatiVariant { kDegenerate, kStandard };

inline const char* to_string(RiccatiVariant v) {
  return v == RiccatiVariant::kDegenerate ? "degenerate" : "standard";
}

template <typename Scalar>
struct RiccatiSolution {
  Matrix<Scalar> P;
  RiccatiVariant variant = RiccatiVariant::kStandard;
  Scalar residual_norm{0};
  Scalar closed_loop_abscissa{0};
  Scalar p_min_eigenvalue{0};
  /// Condition number of the Gramian; NaN for the standard variant.
  Scalar w_condition = std::numeric_limits<Scalar>::quiet_NaN();
  /// |P - P_newton| for the degenerate variant; NaN otherwise.
  Scalar oracle_gap = std::numeric_limits<Scalar>::quiet_NaN();
  int iterations = 0;
  std::vector<Scalar> residual_history;
};

template <typename Scalar>
Matrix<Scalar> symmetrized(const Matrix<Scalar>& P) {
  return (P + P.transpose()) / Scalar(2);
}

/// |A'P + PA - P B B' P + [M'M]| (Frobenius).
template <typename Scalar>
Scalar riccati_residual(const StateSpace<Scalar>& sys, const Matrix<Scalar>& P, bool include_M) {
  Matrix<Scalar> R = sys.A.transpose() * P + P * sys.A - P * sys.B * sys.B.transpose() * P;
  if (include_M) R += sys.M.transpose() * sys.M;
  return R.norm();
}

namespace detail {

template <typename Scalar>
void require_hypotheses(const StateSpace<Scalar>& sys, const Tolerances& tol) {
  const auto h = check_hypotheses(sys, tol);
  require(h.minus_A_stable, ErrorKind::kHypothesis,
          "H1 fails: -A is not exponentially stable (spectral abscissa of -A = " +
              std::to_string(static_cast<double>(h.minus_A_abscissa)) + ")");
  require(h.exactly_controllable, ErrorKind::kHypothesis,
          "H2 fails: (-A, B) is not controllable (Kalman rank " + std::to_string(h.controllability_rank) + " < " +
              std::to_string(h.states) + ")");
}

template <typename Scalar>
Scalar newton_threshold(const StateSpace<Scalar>& sys, const Matrix<Scalar>& P, bool include_M,
                        const Tolerances& tol) {
  const Scalar mm = include_M ? (sys.M.transpose() * sys.M).norm() : Scalar(0);
  const Scalar pn = P.norm();
  return Scalar(tol.newton_tol) * (Scalar(1) + mm + pn * pn * (sys.B * sys.B.transpose()).norm());
}

}  // namespace detail

template <typename Scalar>
struct NewtonResult {
  Matrix<Scalar> P;
  int iterations = 0;
  std::vector<Scalar> residual_history;
};

/// Newton-Kleinman iteration
///   (A - B K_k)' P_{k+1} + P_{k+1} (A - B K_k) = -K_k' K_k - [M'M],
///   K_{k+1} = B' P_{k+1},
/// from a stabilizing K0. Converges to the stabilizing solution.
template <typename Scalar>
NewtonResult<Scalar> newton_kleinman(const StateSpace<Scalar>& sys, bool include_M, const Matrix<Scalar>& K0,
                                     const Tolerances& tol = {}) {
  sys.validate();
  detail::require(K0.rows() == sys.inputs() && K0.cols() == sys.states(), ErrorKind::kInvalidArgument,
                  "initial gain must be " + std::to_string(sys.inputs()) + "x" + std::to_string(sys.states()) +
                      ", got " + detail::shape(K0));
  const Matrix<Scalar> MtM = include_M ? Matrix<Scalar>(sys.M.transpose() * sys.M)
                                       : Matrix<Scalar>::Zero(sys.states(), sys.states());
  NewtonResult<Scalar> out;
  Matrix<Scalar> K = K0;
  Matrix<Scalar> P_prev;
  bool prev_within = false;
  for (int k = 0; k < tol.newton_max_iterations; ++k) {
    const Matrix<Scalar> F = sys.A - sys.B * K;
    const Scalar abscissa = spectral_abscissa(F);
    if (!(abscissa < -Scalar(tol.stability_margin))) {
      // A polishing step that loses stability is discarded.
      if (prev_within) {
        out.P = std::move(P_prev);
        return out;
      }
      std::ostringstream msg;
      msg << "Newton-Kleinman lost the stabilizing property at iteration " << k
          << " (closed-loop abscissa " << static_cast<double>(abscissa) << ")";
      detail::fail(ErrorKind::kSolver, msg.str());
    }
    const Matrix<Scalar> rhs = -(K.transpose() * K) - MtM;
    Matrix<Scalar> P = symmetrized<Scalar>(
        solve_sylvester<Scalar>(F.transpose(), F, rhs, SylvesterMethod::kAuto, tol.kronecker_max_order));
    out.iterations = k + 1;
    const Scalar residual = riccati_residual(sys, P, include_M);
    out.residual_history.push_back(residual);
    const bool within = residual <= detail::newton_threshold(sys, P, include_M, tol);
    // Two consecutive iterates inside the threshold: the second one is a
    // polishing step that squares the remaining error.
    if (within && prev_within) {
      out.P = std::move(P);
      return out;
    }
    // Rounding floor: the residual stopped improving while the iterates barely move.
    if (k >= 2 && P_prev.size() > 0) {
      const auto& h = out.residual_history;
      const bool flat = h[k] >= Scalar(0.5) * h[k - 1] && h[k - 1] >= Scalar(0.5) * h[k - 2];
      if (flat && (P - P_prev).norm() <= Scalar(1e-6) * (Scalar(1) + P.norm())) {
        if (h[k] > h[k - 1]) P = std::move(P_prev);
        out.P = std::move(P);
        return out;
      }
    }
    prev_within = within;
    K = sys.B.transpose() * P;
    P_prev = std::move(P);
  }
  std::ostringstream msg;
  msg << "Newton-Kleinman did not converge in " << tol.newton_max_iterations << " iterations; residuals:";
  for (Scalar r : out.residual_history) msg << ' ' << static_cast<double>(r);
  detail::fail(ErrorKind::kSolver, msg.str());
}

/// Bass's gain K = B' Z^{-1} with (A + s I) Z + Z (A + s I)' = 2 B B',
/// s = max(0, -min Re lambda(A)) + 1. Then (A - B K) Z + Z (A - B K)' = -2 s Z,
/// so A - B K is stable whenever (A, B) is controllable.
template <typename Scalar>
Matrix<Scalar> bass_stabilizing_gain(const StateSpace<Scalar>& sys, const Tolerances& tol = {}) {
  sys.validate();
  const Eigen::Index n = sys.states();
  const Scalar shift = std::max(Scalar(0), -eigenvalues(sys.A).real().minCoeff()) + Scalar(1);
  const Matrix<Scalar> As = sys.A + shift * Matrix<Scalar>::Identity(n, n);
  const Matrix<Scalar> Z = symmetrized<Scalar>(solve_lyapunov<Scalar>(
      As, Scalar(2) * sys.B * sys.B.transpose(), SylvesterMethod::kAuto, tol.kronecker_max_order));
  Eigen::LDLT<Matrix<Scalar>> ldlt(Z);
  detail::require(ldlt.info() == Eigen::Success && ldlt.isPositive(), ErrorKind::kSolver,
                  "Bass gain: shifted Gramian is not positive definite");
  return ldlt.solve(sys.B).transpose();
}

/// Independent cross-check for both Riccati variants; returns the fixed point.
template <typename Scalar>
Matrix<Scalar> newton_kleinman_oracle(const StateSpace<Scalar>& sys, bool include_M, const Matrix<Scalar>& K0,
                                      const Tolerances& tol = {}) {
  return newton_kleinman(sys, include_M, K0, tol).P;
}

namespace detail {

template <typename Scalar>
struct oracle_scalar {
  using type = Scalar;
};
template <>
struct oracle_scalar<float> {
  using type = long double;
};
template <>
struct oracle_scalar<double> {
  using type = long double;
};
template <typename Scalar>
using oracle_scalar_t = typename oracle_scalar<Scalar>::type;

template <typename Scalar>
void certify(const StateSpace<Scalar>& sys, RiccatiSolution<Scalar>& sol, const Tolerances& tol) {
  const bool include_M = sol.variant == RiccatiVariant::kStandard;
  sol.residual_norm = riccati_residual(sys, sol.P, include_M);
  sol.closed_loop_abscissa = spectral_abscissa(Matrix<Scalar>(sys.A - sys.B * sys.B.transpose() * sol.P));
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(sol.P, Eigen::EigenvaluesOnly);
  sol.p_min_eigenvalue = eig.eigenvalues()(0);
  require(sol.closed_loop_abscissa < -Scalar(tol.stability_margin), ErrorKind::kSolver,
          "closed loop A - BB'P is not exponentially stable (abscissa " +
              std::to_string(static_cast<double>(sol.closed_loop_abscissa)) + ")");
  require(sol.p_min_eigenvalue >= -Scalar(1e-10) * sol.P.norm(), ErrorKind::kSolver,
          "Riccati solution is not positive semidefinite (lambda_min " +
              std::to_string(static_cast<double>(sol.p_min_eigenvalue)) + ")");
  if (!include_M)
    require(sol.p_min_eigenvalue > Scalar(0), ErrorKind::kSolver, "degenerate Riccati solution is not invertible");
}

}  // namespace detail

template <typename Scalar>
RiccatiSolution<Scalar> solve_degenerate_are(const StateSpace<Scalar>& sys, const Tolerances& tol = {}) {
  detail::require_hypotheses(sys, tol);
  const auto gramian = controllability_gramian(sys, tol);
  RiccatiSolution<Scalar> sol;
  sol.variant = RiccatiVariant::kDegenerate;
  sol.w_condition = gramian.condition;
  detail::require(gramian.condition <= Scalar(tol.max_gramian_condition), ErrorKind::kSolver,
                  "controllability Gramian is numerically singular (condition " +
                      std::to_string(static_cast<double>(gramian.condition)) + ")");
  Eigen::LLT<Matrix<Scalar>> llt(gramian.W);
  detail::require(llt.info() == Eigen::Success, ErrorKind::kSolver, "controllability Gramian is not positive definite");
  sol.P = symmetrized<Scalar>(llt.solve(Matrix<Scalar>::Identity(sys.states(), sys.states())));
  detail::certify(sys, sol, tol);

  // The oracle runs in extended precision: near-uncontrollable instances
  // make the Riccati equation itself ill-conditioned, and a double-precision
  // Newton fixed point would then be the less accurate side of the check.
  using Wide = detail::oracle_scalar_t<Scalar>;
  const StateSpace<Wide> wide{sys.A.template cast<Wide>(), sys.B.template cast<Wide>(), sys.M.template cast<Wide>()};
  const Matrix<Scalar> P_newton =
      newton_kleinman_oracle(wide, false, bass_stabilizing_gain(wide, tol), tol).template cast<Scalar>();
  sol.oracle_gap = (sol.P - P_newton).norm();
  detail::require(sol.oracle_gap <= Scalar(tol.oracle_agreement) * (Scalar(1) + sol.P.norm()), ErrorKind::kSolver,
                  "inverse-Gramian solution disagrees with the Newton-Kleinman oracle by " +
                      std::to_string(static_cast<double>(sol.oracle_gap)));
  return sol;
}

template <typename Scalar>
RiccatiSolution<Scalar> solve_standard_are(const StateSpace<Scalar>& sys, const Tolerances& tol = {}) {
  const auto degenerate = solve_degenerate_are(sys, tol);
  const Matrix<Scalar> K0 = sys.B.transpose() * degenerate.P;
  auto newton = newton_kleinman(sys, true, K0, tol);
  RiccatiSolution<Scalar> sol;
  sol.variant = RiccatiVariant::kStandard;
  sol.P = std::move(newton.P);
  sol.iterations = newton.iterations;
  sol.residual_history = std::move(newton.residual_history);
  detail::certify(sys, sol, tol);
  return sol;
}

template <typename Scalar>
RiccatiSolution<Scalar> solve_are(const StateSpace<Scalar>& sys, RiccatiVariant variant, const Tolerances& tol = {}) {
  return variant == RiccatiVariant::kDegenerate ? solve_degenerate_are(sys, tol) : solve_standard_are(sys, tol);
}

}  // namespace aac

#endif  // AACONTROL_RICCATI_HPP
