#ifndef AACONTROL_SYNTHESIS_HPP
#define AACONTROL_SYNTHESIS_HPP

// Optimal average-cost feedback  u = -B'(P y + r)  and its closed-form cost
//   J = 2 <r, f>_aa - |B' r|^2_aa,
// where r is the bounded solution of the adjoint equation
//   r' = -(A - B B' P)' r - P f,   r(t) = int_t^inf e^{(s-t) L'} P f(s) ds.
//
// Every frequency-domain routine uses the phasor convention of signals.hpp.
// For a generator G without imaginary-axis spectrum, the unique bounded
// solution of y' = G y + g has phasors (i w I - G)^{-1} g_hat.

#include "aacontrol/config.hpp"
#include "aacontrol/linalg.hpp"
#include "aacontrol/riccati.hpp"
#include "aacontrol/signals.hpp"
#include "aacontrol/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace aac {

template <typename Scalar>
struct FeedbackLaw {
  StateSpace<Scalar> system;
  RiccatiSolution<Scalar> riccati;
  TrigPolynomial<Scalar> r;
  Matrix<Scalar> gain;            // K = B' P
  TrigPolynomial<Scalar> bias;    // b = B' r
  Matrix<Scalar> closed_loop;     // L = A - B B' P

  /// u(t) = -K y - b(t).
  Vector<Scalar> control(const Vector<Scalar>& y, Scalar t) const { return -gain * y - bias.evaluate(t); }
};

enum class CostMethod { kClosedForm, kDecomposition, kEmpirical };

inline const char* to_string(CostMethod m) {
  switch (m) {
    case CostMethod::kClosedForm: return "closed_form";
    case CostMethod::kDecomposition: return "decomposition";
    case CostMethod::kEmpirical: return "empirical";
  }
  return "unknown";
}

template <typename Scalar>
struct CostReport {
  Scalar J{0};
  Scalar cross_term{0};      // 2 <r, f>_aa
  Scalar penalty_term{0};    // |B' r|^2_aa
  Scalar deviation_term{0};  // |u + B'(P y + r)|^2_aa, decomposition only
  CostMethod method = CostMethod::kClosedForm;
};

namespace detail {

/// Residual precision for iterative refinement.
template <typename Scalar>
struct Wider {
  using type = Scalar;
};
template <>
struct Wider<double> {
  using type = long double;
};

}  // namespace detail

/// Phasor-wise bounded solution of y' = G y + g. Two refinement sweeps with
/// the residual in extended precision bring the forward error down to the
/// working precision when (i w - G) is ill conditioned.
template <typename Scalar>
TrigPolynomial<Scalar> bounded_harmonic_solution(const Matrix<Scalar>& G, const TrigPolynomial<Scalar>& g) {
  using Complex = std::complex<Scalar>;
  detail::require(G.rows() == G.cols() && G.cols() == g.dimension(), ErrorKind::kInvalidArgument,
                  "generator " + detail::shape(G) + " does not match signal dimension " +
                      std::to_string(g.dimension()));
  const Eigen::Index n = G.rows();
  const ComplexMatrix<Scalar> Gc = G.template cast<Complex>();
  return g.map_phasors(n, [&](Scalar omega, const ComplexVector<Scalar>& ghat) {
    ComplexMatrix<Scalar> R = -Gc;
    R.diagonal().array() += Complex(0, omega);
    Eigen::PartialPivLU<ComplexMatrix<Scalar>> lu(R);
    detail::require(lu.rcond() > Scalar(100) * std::numeric_limits<Scalar>::epsilon(), ErrorKind::kSolver,
                    "resolvent (i w - G) is singular at w = " + std::to_string(static_cast<double>(omega)));
    using Wide = typename detail::Wider<Scalar>::type;
    using WideComplex = std::complex<Wide>;
    const ComplexMatrix<Wide> Rw = R.template cast<WideComplex>();
    const ComplexVector<Wide> bw = ghat.template cast<WideComplex>();
    ComplexVector<Scalar> x = lu.solve(ghat);
    for (int sweep = 0; sweep < 2; ++sweep) {
      const ComplexVector<Scalar> residual = (bw - Rw * x.template cast<WideComplex>()).template cast<Complex>();
      x += lu.solve(residual);
    }
    return x;
  });
}

/// r from the anticausal integral; per harmonic r_hat = -(L' + i w I)^{-1} P f_hat.
template <typename Scalar>
TrigPolynomial<Scalar> solve_r_harmonic(const Matrix<Scalar>& L, const Matrix<Scalar>& P,
                                        const TrigPolynomial<Scalar>& f, const Tolerances& tol = {}) {
  const Scalar abscissa = spectral_abscissa(L);
  detail::require(abscissa < -Scalar(tol.stability_margin), ErrorKind::kHypothesis,
                  "adjoint signal needs a stable closed loop (abscissa " +
                      std::to_string(static_cast<double>(abscissa)) + ")");
  detail::require(P.rows() == L.rows() && P.cols() == f.dimension(), ErrorKind::kInvalidArgument,
                  "P " + detail::shape(P) + " does not match the closed loop " + detail::shape(L) +
                      " and forcing dimension " + std::to_string(f.dimension()));
  // (d/dt) r = (-L') r + (-P f).
  return bounded_harmonic_solution<Scalar>(Matrix<Scalar>(-L.transpose()), f.apply(-P));
}

/// r from the two-sided dichotomy formula, i.e. the bounded solution of
/// r' = L' r + P f. Only hyperbolicity of L' is needed.
template <typename Scalar>
TrigPolynomial<Scalar> solve_r_dichotomy(const Matrix<Scalar>& L, const Matrix<Scalar>& P,
                                         const TrigPolynomial<Scalar>& f, const Tolerances& tol = {}) {
  const Matrix<Scalar> Lt = L.transpose();
  hyperbolic_splitting<Scalar>(Lt, tol);
  detail::require(P.rows() == L.rows() && P.cols() == f.dimension(), ErrorKind::kInvalidArgument,
                  "P " + detail::shape(P) + " does not match the generator " + detail::shape(L));
  return bounded_harmonic_solution<Scalar>(Lt, f.apply(P));
}

struct QuadratureOptions {
  double truncation = 0;  // upper integration length
  double step = 0;        // Simpson step
};

/// Truncation 40 / delta and step 1 / (50 max(|L^4|^(1/4), w_max)), where
/// delta is the slowest decay rate. The fourth-power norm bounds the Simpson
/// error term and stays below |L| for strongly non-normal L.
template <typename Scalar>
QuadratureOptions default_quadrature(const Matrix<Scalar>& L, Scalar max_frequency = Scalar(0)) {
  using std::pow;
  const double delta = -static_cast<double>(spectral_abscissa(L));
  detail::require(delta > 0, ErrorKind::kHypothesis, "quadrature defaults need a stable generator");
  const Matrix<Scalar> L2 = L * L;
  const double scale = pow(static_cast<double>((L2 * L2).operatorNorm()), 0.25);
  return {40.0 / delta, 1.0 / (50.0 * std::max(scale, static_cast<double>(max_frequency)))};
}

namespace detail {

template <typename Scalar>
void check_truncation(const Matrix<Scalar>& L, const QuadratureOptions& q, const Tolerances& tol) {
  const Scalar abscissa = spectral_abscissa(L);
  require(abscissa < -Scalar(tol.stability_margin), ErrorKind::kHypothesis,
          "anticausal quadrature needs a stable closed loop (abscissa " +
              std::to_string(static_cast<double>(abscissa)) + ")");
  require(q.step > 0, ErrorKind::kInvalidArgument, "quadrature step must be positive");
  const double delta = -static_cast<double>(abscissa);
  if (std::exp(-delta * q.truncation) > 1e-12)
    fail(ErrorKind::kInvalidArgument, "quadrature truncation " + std::to_string(q.truncation) +
                                          " too short for decay rate " + std::to_string(delta) +
                                          "; use at least " + std::to_string(40.0 / delta));
}

}  // namespace detail

/// int_t^{t+truncation} e^{(s-t) L'} P f(s) ds by composite Simpson, one
/// column per requested time.
template <typename Scalar>
Matrix<Scalar> quadrature_r(const Matrix<Scalar>& L, const Matrix<Scalar>& P, const Signal<Scalar>& f,
                            const std::vector<Scalar>& times, const QuadratureOptions& q,
                            const Tolerances& tol = {}) {
  detail::check_truncation(L, q, tol);
  detail::require(P.cols() == dimension(f), ErrorKind::kInvalidArgument, "P does not match forcing dimension");
  long panels = static_cast<long>(std::ceil(q.truncation / q.step));
  if (panels % 2) ++panels;
  const Scalar h = Scalar(q.truncation) / Scalar(panels);
  const Matrix<Scalar> E = matrix_exponential(Matrix<Scalar>(L.transpose()), h);
  Matrix<Scalar> out(L.rows(), static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const Scalar t = times[i];
    // Horner over k: sum_k w_k E^k P f(t + k h).
    Vector<Scalar> acc = P * evaluate(f, t + Scalar(panels) * h);
    for (long k = panels - 1; k >= 0; --k) {
      const Scalar w = (k == 0) ? Scalar(1) : (k % 2 ? Scalar(4) : Scalar(2));
      acc = w * (P * evaluate(f, t + Scalar(k) * h)) + E * acc;
    }
    out.col(static_cast<Eigen::Index>(i)) = acc * (h / Scalar(3));
  }
  return out;
}

/// r on the grid t0 + k * spacing, k < count, through the exact recursion
///   r(t) = int_t^{t+spacing} e^{(s-t) L'} P f(s) ds + e^{spacing L'} r(t + spacing),
/// one Simpson panel per cell; the last node uses quadrature_r.
template <typename Scalar>
SampledSignal<Scalar> quadrature_r_grid(const Matrix<Scalar>& L, const Matrix<Scalar>& P, const Signal<Scalar>& f,
                                        Scalar t0, Eigen::Index count, Scalar spacing, const QuadratureOptions& q,
                                        const Tolerances& tol = {}) {
  detail::require(count >= 1 && spacing > Scalar(0), ErrorKind::kInvalidArgument, "empty or degenerate grid");
  SampledSignal<Scalar> out{t0, spacing, Matrix<Scalar>(L.rows(), count)};
  out.values.col(count - 1) = quadrature_r(L, P, f, {out.time(count - 1)}, q, tol);
  const Matrix<Scalar> Lt = L.transpose();
  const Matrix<Scalar> E_half = matrix_exponential(Lt, spacing / Scalar(2));
  const Matrix<Scalar> E_full = E_half * E_half;
  Vector<Scalar> Pf_right = P * evaluate(f, out.time(count - 1));
  for (Eigen::Index k = count - 2; k >= 0; --k) {
    const Scalar t = out.time(k);
    const Vector<Scalar> Pf_left = P * evaluate(f, t);
    const Vector<Scalar> Pf_mid = P * evaluate(f, t + spacing / Scalar(2));
    out.values.col(k) = (spacing / Scalar(6)) * (Pf_left + Scalar(4) * (E_half * Pf_mid) + E_full * Pf_right) +
                        E_full * out.values.col(k + 1);
    Pf_right = Pf_left;
  }
  return out;
}

template <typename Scalar>
FeedbackLaw<Scalar> synthesize(const StateSpace<Scalar>& sys, const TrigPolynomial<Scalar>& f,
                               RiccatiVariant variant = RiccatiVariant::kStandard, const Tolerances& tol = {}) {
  sys.validate();
  detail::require(f.dimension() == sys.states(), ErrorKind::kInvalidArgument,
                  "forcing dimension " + std::to_string(f.dimension()) + " does not match state dimension " +
                      std::to_string(sys.states()));
  FeedbackLaw<Scalar> law;
  law.system = sys;
  law.riccati = solve_are(sys, variant, tol);
  law.gain = sys.B.transpose() * law.riccati.P;
  law.closed_loop = sys.A - sys.B * law.gain;
  law.r = solve_r_harmonic<Scalar>(law.closed_loop, law.riccati.P, f, tol);
  law.bias = law.r.apply(sys.B.transpose());
  return law;
}

/// Bounded trajectory of y' = L y + f - B b under the synthesized law.
template <typename Scalar>
TrigPolynomial<Scalar> closed_loop_trajectory(const FeedbackLaw<Scalar>& law, const TrigPolynomial<Scalar>& f,
                                              const Tolerances& tol = {}) {
  hyperbolic_splitting<Scalar>(law.closed_loop, tol);
  return bounded_harmonic_solution<Scalar>(law.closed_loop, f - law.bias.apply(law.system.B));
}

/// Bounded trajectory of y' = A y + B u + f for an open-loop control u.
template <typename Scalar>
TrigPolynomial<Scalar> admissible_trajectory(const StateSpace<Scalar>& sys, const TrigPolynomial<Scalar>& u,
                                             const TrigPolynomial<Scalar>& f, const Tolerances& tol = {}) {
  hyperbolic_splitting<Scalar>(sys.A, tol);
  return bounded_harmonic_solution<Scalar>(sys.A, u.apply(sys.B) + f);
}

/// u = -K y - b evaluated as a trigonometric polynomial.
template <typename Scalar>
TrigPolynomial<Scalar> realized_control(const FeedbackLaw<Scalar>& law, const TrigPolynomial<Scalar>& y) {
  return -(y.apply(law.gain) + law.bias);
}

/// J = 2 <r, f>_aa - |B' r|^2_aa.
template <typename Scalar>
CostReport<Scalar> closed_form_cost(const FeedbackLaw<Scalar>& law, const TrigPolynomial<Scalar>& f,
                                    const Tolerances& tol = {}) {
  CostReport<Scalar> c;
  c.method = CostMethod::kClosedForm;
  c.cross_term = Scalar(2) * bohr_inner_closed(law.r, f, tol.frequency_tol);
  c.penalty_term = aa_norm_sq(law.bias, tol.frequency_tol);
  c.J = c.cross_term - c.penalty_term;
  return c;
}

/// J(u) = |u + B'(P y + r)|^2_aa + 2 <r, f>_aa - |B' r|^2_aa for an admissible
/// pair (u, y); the caller guarantees y is the trajectory generated by u.
template <typename Scalar>
CostReport<Scalar> cost_decomposition(const TrigPolynomial<Scalar>& u, const TrigPolynomial<Scalar>& y,
                                      const FeedbackLaw<Scalar>& law, const TrigPolynomial<Scalar>& f,
                                      const Tolerances& tol = {}) {
  detail::require(u.dimension() == law.system.inputs() && y.dimension() == law.system.states(),
                  ErrorKind::kInvalidArgument,
                  "control/state dimensions " + std::to_string(u.dimension()) + "/" + std::to_string(y.dimension()) +
                      " do not match the system " + std::to_string(law.system.inputs()) + "/" +
                      std::to_string(law.system.states()));
  CostReport<Scalar> c = closed_form_cost(law, f, tol);
  c.method = CostMethod::kDecomposition;
  c.deviation_term = aa_norm_sq(u + y.apply(law.gain) + law.bias, tol.frequency_tol);
  c.J = c.deviation_term + c.cross_term - c.penalty_term;
  return c;
}

/// |M y|^2_aa + |u|^2_aa straight from the definition of the cost.
template <typename Scalar>
Scalar direct_average_cost(const StateSpace<Scalar>& sys, const TrigPolynomial<Scalar>& u,
                           const TrigPolynomial<Scalar>& y, const Tolerances& tol = {}) {
  return aa_norm_sq(y.apply(sys.M), tol.frequency_tol) + aa_norm_sq(u, tol.frequency_tol);
}

/// Feedback law for forcing known only pointwise: r and b = B' r are
/// tabulated on a uniform grid by quadrature.
template <typename Scalar>
struct NumericFeedbackLaw {
  StateSpace<Scalar> system;
  RiccatiSolution<Scalar> riccati;
  Matrix<Scalar> gain;
  Matrix<Scalar> closed_loop;
  SampledSignal<Scalar> r;
  SampledSignal<Scalar> bias;
};

template <typename Scalar>
NumericFeedbackLaw<Scalar> synthesize_numeric(const StateSpace<Scalar>& sys, const Signal<Scalar>& f, Scalar t_end,
                                              Scalar spacing, RiccatiVariant variant = RiccatiVariant::kStandard,
                                              const Tolerances& tol = {}) {
  sys.validate();
  detail::require(dimension(f) == sys.states(), ErrorKind::kInvalidArgument,
                  "forcing dimension does not match state dimension");
  detail::require(t_end > Scalar(0) && spacing > Scalar(0), ErrorKind::kInvalidArgument,
                  "grid horizon and spacing must be positive");
  NumericFeedbackLaw<Scalar> law;
  law.system = sys;
  law.riccati = solve_are(sys, variant, tol);
  law.gain = sys.B.transpose() * law.riccati.P;
  law.closed_loop = sys.A - sys.B * law.gain;
  const auto count = static_cast<Eigen::Index>(std::ceil(t_end / spacing - Scalar(1e-9))) + 1;
  law.r = quadrature_r_grid<Scalar>(law.closed_loop, law.riccati.P, f, Scalar(0), count, spacing,
                                    default_quadrature<Scalar>(law.closed_loop, Scalar(1)), tol);
  law.bias = SampledSignal<Scalar>{law.r.t0, law.r.spacing, sys.B.transpose() * law.r.values};
  return law;
}

}  // namespace aac

#endif  // AACONTROL_SYNTHESIS_HPP
