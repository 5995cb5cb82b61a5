#ifndef AACONTROL_CONFIG_HPP
#define AACONTROL_CONFIG_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace aac {

/// Failure category; the CLI maps each one to its own exit code.
enum class ErrorKind {
  kInvalidArgument,
  kHypothesis,
  kSolver,
  kSimulation,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical thresholds shared by every module. Defaults are the documented
/// values; the CLI can override any of them per run.
struct Tolerances {
  /// Absolute margin on Re(lambda) for "exponentially stable".
  double stability_margin = 1e-8;
  /// Absolute margin on |Re(lambda)| for "hyperbolic".
  double hyperbolicity_margin = 1e-8;
  /// Two frequencies match when |w1 - w2| <= frequency_tol * max(1, w1, w2).
  double frequency_tol = 1e-9;
  /// Relative singular-value cutoff of the Kalman rank test.
  double rank_tol = 1e-10;
  /// Largest admissible condition number of the controllability Gramian.
  double max_gramian_condition = 1e12;
  /// Newton-Kleinman iteration cap.
  int newton_max_iterations = 50;
  /// Newton-Kleinman residual threshold, scaled by 1 + |M'M| + |P|^2 |BB'|.
  double newton_tol = 1e-11;
  /// Agreement required between the Gramian solution and the Newton oracle.
  double oracle_agreement = 1e-8;
  /// Lyapunov/Sylvester systems up to this order use the Kronecker solve.
  int kronecker_max_order = 20;
  /// Explicit RK4 step guard: dt * |closed loop| must not exceed this.
  double rk4_step_bound = 0.1;
};

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

template <typename Derived>
std::string shape(const Eigen::EigenBase<Derived>& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace detail

}  // namespace aac

#endif  // AACONTROL_CONFIG_HPP
