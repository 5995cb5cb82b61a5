#ifndef AACONTROL_SPECTRAL_HPP
#define AACONTROL_SPECTRAL_HPP

#include "aacontrol/config.hpp"
#include "aacontrol/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace aac {

/// y' = A y + B u + f with running cost |M y|^2 + |u|^2.
template <typename Scalar>
struct StateSpace {
  Matrix<Scalar> A;
  Matrix<Scalar> B;
  Matrix<Scalar> M;

  StateSpace() = default;
  StateSpace(Matrix<Scalar> a, Matrix<Scalar> b, Matrix<Scalar> m) : A(std::move(a)), B(std::move(b)), M(std::move(m)) {
    validate();
  }

  Eigen::Index states() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }

  void validate() const {
    detail::require(A.rows() >= 1 && A.rows() == A.cols(), ErrorKind::kInvalidArgument,
                    "A must be square and non-empty, got " + detail::shape(A));
    detail::require(B.rows() == A.rows() && B.cols() >= 1, ErrorKind::kInvalidArgument,
                    "B must be " + std::to_string(A.rows()) + "xm with m >= 1, got " + detail::shape(B));
    detail::require(M.cols() == A.rows() && M.rows() >= 1, ErrorKind::kInvalidArgument,
                    "M must be px" + std::to_string(A.rows()) + ", got " + detail::shape(M));
    detail::require(A.allFinite() && B.allFinite() && M.allFinite(), ErrorKind::kInvalidArgument,
                    "system matrices must be finite");
  }
};

template <typename Derived>
ComplexVector<typename Derived::Scalar> eigenvalues(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  detail::require(A.rows() == A.cols(), ErrorKind::kInvalidArgument,
                  "eigenvalues need a square matrix, got " + detail::shape(A));
  Eigen::EigenSolver<Matrix<Scalar>> solver(A.eval(), false);
  detail::require(solver.info() == Eigen::Success, ErrorKind::kSolver,
                  "eigenvalue iteration did not converge for a " + detail::shape(A) + " matrix");
  return solver.eigenvalues();
}

/// max Re(lambda) over the spectrum of A.
template <typename Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& A) {
  return eigenvalues(A).real().maxCoeff();
}

/// Kalman matrix [B, AB, ..., A^{n-1} B].
template <typename Scalar>
Matrix<Scalar> controllability_matrix(const Matrix<Scalar>& A, const Matrix<Scalar>& B) {
  const Eigen::Index n = A.rows(), m = B.cols();
  Matrix<Scalar> K(n, n * m);
  Matrix<Scalar> block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    K.middleCols(k * m, m) = block;
    block = A * block;
  }
  return K;
}

template <typename Scalar>
struct HypothesisReport {
  bool minus_A_stable = false;       // H1
  bool exactly_controllable = false; // H2
  Scalar minus_A_abscissa{0};
  Eigen::Index controllability_rank = 0;
  Eigen::Index states = 0;

  bool ok() const { return minus_A_stable && exactly_controllable; }
};

template <typename Scalar>
HypothesisReport<Scalar> check_hypotheses(const StateSpace<Scalar>& sys, const Tolerances& tol = {}) {
  sys.validate();
  HypothesisReport<Scalar> report;
  report.states = sys.states();
  report.minus_A_abscissa = spectral_abscissa(-sys.A);
  report.minus_A_stable = report.minus_A_abscissa < -Scalar(tol.stability_margin);
  const Matrix<Scalar> K = controllability_matrix(sys.A, sys.B);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(K);
  const auto& sv = svd.singularValues();
  const Scalar cutoff = Scalar(tol.rank_tol) * (sv.size() > 0 ? sv(0) : Scalar(0));
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > Scalar(0)) ++report.controllability_rank;
  report.exactly_controllable = report.controllability_rank == sys.states();
  return report;
}

/// W = int_0^inf e^{-tA} B B' e^{-tA'} dt, i.e. A W + W A' = B B'.
template <typename Scalar>
struct GramianCertificate {
  Matrix<Scalar> W;
  Scalar beta{0};  // lambda_min(W)
  Scalar lyapunov_residual{0};
  Scalar condition{0};  // lambda_max / lambda_min, +inf when beta <= 0
};

template <typename Scalar>
GramianCertificate<Scalar> controllability_gramian(const StateSpace<Scalar>& sys, const Tolerances& tol = {},
                                                   SylvesterMethod method = SylvesterMethod::kAuto) {
  sys.validate();
  const Scalar abscissa = spectral_abscissa(-sys.A);
  detail::require(abscissa < -Scalar(tol.stability_margin), ErrorKind::kHypothesis,
                  "H1 fails: -A is not exponentially stable (spectral abscissa of -A = " +
                      std::to_string(static_cast<double>(abscissa)) + ")");
  const Matrix<Scalar> BBt = sys.B * sys.B.transpose();
  GramianCertificate<Scalar> cert;
  cert.W = solve_lyapunov<Scalar>(sys.A, BBt, method, tol.kronecker_max_order);
  cert.W = (cert.W + cert.W.transpose()) / Scalar(2);
  cert.lyapunov_residual = (sys.A * cert.W + cert.W * sys.A.transpose() - BBt).norm();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(cert.W, Eigen::EigenvaluesOnly);
  cert.beta = eig.eigenvalues()(0);
  const Scalar top = eig.eigenvalues()(eig.eigenvalues().size() - 1);
  cert.condition = cert.beta > Scalar(0) ? top / cert.beta : std::numeric_limits<Scalar>::infinity();
  return cert;
}

/// Stable/unstable spectral projectors of a hyperbolic generator.
template <typename Scalar>
struct DichotomySplitting {
  Matrix<Scalar> Pi_s;
  Matrix<Scalar> Pi_u;
  Scalar delta{0};  // min |Re(lambda)|
  Eigen::Index stable_dim = 0;
};

template <typename Scalar>
DichotomySplitting<Scalar> hyperbolic_splitting(const Matrix<Scalar>& L, const Tolerances& tol = {}) {
  detail::require(L.rows() == L.cols() && L.rows() >= 1, ErrorKind::kInvalidArgument,
                  "hyperbolic splitting needs a square matrix, got " + detail::shape(L));
  auto schur = ordered_schur<Scalar>(L, [](const std::complex<Scalar>& z) { return z.real() < Scalar(0); });
  DichotomySplitting<Scalar> out;
  out.delta = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < schur.T.rows(); ++i) {
    const std::complex<Scalar> z = schur.T(i, i);
    using std::abs;
    if (abs(z.real()) <= Scalar(tol.hyperbolicity_margin)) {
      std::ostringstream msg;
      msg << "generator is not hyperbolic: eigenvalue " << static_cast<double>(z.real()) << (z.imag() < 0 ? "" : "+")
          << static_cast<double>(z.imag()) << "i lies within " << tol.hyperbolicity_margin
          << " of the imaginary axis";
      detail::fail(ErrorKind::kHypothesis, msg.str());
    }
    out.delta = std::min(out.delta, abs(z.real()));
  }
  out.stable_dim = schur.selected;
  out.Pi_s = invariant_subspace_projector(schur);
  out.Pi_u = Matrix<Scalar>::Identity(L.rows(), L.cols()) - out.Pi_s;
  return out;
}

/// Smallest C with |e^{tL} Pi_s| <= C e^{-rate t} at the given sample times.
template <typename Scalar>
Scalar fitted_decay_constant(const Matrix<Scalar>& L, const Matrix<Scalar>& Pi_s, Scalar rate,
                             const std::vector<Scalar>& times) {
  using std::exp;
  Scalar C(0);
  for (Scalar t : times) {
    const Scalar norm = spectral_norm(matrix_exponential(L, t) * Pi_s);
    C = std::max(C, norm * exp(rate * t));
  }
  return C;
}

}  // namespace aac

#endif  // AACONTROL_SPECTRAL_HPP
