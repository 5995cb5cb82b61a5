#ifndef AACONTROL_INSTANTIATIONS_HPP
#define AACONTROL_INSTANTIATIONS_HPP

// The double instantiations of the heavy solvers are compiled once into the
// library; translation units that include the umbrella header only link
// against them.

#include "aacontrol/linalg.hpp"
#include "aacontrol/riccati.hpp"
#include "aacontrol/signals.hpp"
#include "aacontrol/simulator.hpp"
#include "aacontrol/spectral.hpp"
#include "aacontrol/synthesis.hpp"

#define AACONTROL_INSTANTIATE(PREFIX, S)                                                                              \
  PREFIX class TrigPolynomial<S>;                                                                                     \
  PREFIX Matrix<S> sylvester_kronecker<S>(const Matrix<S>&, const Matrix<S>&, const Matrix<S>&);                      \
  PREFIX Matrix<S> sylvester_schur<S>(const Matrix<S>&, const Matrix<S>&, const Matrix<S>&);                          \
  PREFIX Matrix<S> solve_sylvester<S>(const Matrix<S>&, const Matrix<S>&, const Matrix<S>&, SylvesterMethod, int);    \
  PREFIX Matrix<S> solve_lyapunov<S>(const Matrix<S>&, const Matrix<S>&, SylvesterMethod, int);                       \
  PREFIX Matrix<S> invariant_subspace_projector<S>(const OrderedSchur<S>&);                                           \
  PREFIX HypothesisReport<S> check_hypotheses<S>(const StateSpace<S>&, const Tolerances&);                            \
  PREFIX GramianCertificate<S> controllability_gramian<S>(const StateSpace<S>&, const Tolerances&, SylvesterMethod);  \
  PREFIX DichotomySplitting<S> hyperbolic_splitting<S>(const Matrix<S>&, const Tolerances&);                          \
  PREFIX S fitted_decay_constant<S>(const Matrix<S>&, const Matrix<S>&, S, const std::vector<S>&);                    \
  PREFIX NewtonResult<S> newton_kleinman<S>(const StateSpace<S>&, bool, const Matrix<S>&, const Tolerances&);         \
  PREFIX Matrix<S> bass_stabilizing_gain<S>(const StateSpace<S>&, const Tolerances&);                                 \
  PREFIX RiccatiSolution<S> solve_degenerate_are<S>(const StateSpace<S>&, const Tolerances&);                         \
  PREFIX RiccatiSolution<S> solve_standard_are<S>(const StateSpace<S>&, const Tolerances&);                           \
  PREFIX RiccatiSolution<S> solve_are<S>(const StateSpace<S>&, RiccatiVariant, const Tolerances&);                    \
  PREFIX TrigPolynomial<S> bounded_harmonic_solution<S>(const Matrix<S>&, const TrigPolynomial<S>&);                  \
  PREFIX TrigPolynomial<S> solve_r_harmonic<S>(const Matrix<S>&, const Matrix<S>&, const TrigPolynomial<S>&,          \
                                               const Tolerances&);                                                    \
  PREFIX TrigPolynomial<S> solve_r_dichotomy<S>(const Matrix<S>&, const Matrix<S>&, const TrigPolynomial<S>&,         \
                                                const Tolerances&);                                                   \
  PREFIX Matrix<S> quadrature_r<S>(const Matrix<S>&, const Matrix<S>&, const Signal<S>&, const std::vector<S>&,       \
                                   const QuadratureOptions&, const Tolerances&);                                      \
  PREFIX SampledSignal<S> quadrature_r_grid<S>(const Matrix<S>&, const Matrix<S>&, const Signal<S>&, S, Eigen::Index, \
                                               S, const QuadratureOptions&, const Tolerances&);                       \
  PREFIX FeedbackLaw<S> synthesize<S>(const StateSpace<S>&, const TrigPolynomial<S>&, RiccatiVariant,                 \
                                      const Tolerances&);                                                             \
  PREFIX TrigPolynomial<S> closed_loop_trajectory<S>(const FeedbackLaw<S>&, const TrigPolynomial<S>&,                 \
                                                     const Tolerances&);                                              \
  PREFIX TrigPolynomial<S> admissible_trajectory<S>(const StateSpace<S>&, const TrigPolynomial<S>&,                   \
                                                    const TrigPolynomial<S>&, const Tolerances&);                     \
  PREFIX NumericFeedbackLaw<S> synthesize_numeric<S>(const StateSpace<S>&, const Signal<S>&, S, S, RiccatiVariant,    \
                                                     const Tolerances&);                                              \
  PREFIX Trajectory<S> integrate_feedback<S>(const StateSpace<S>&, const Matrix<S>&, const Signal<S>&,                \
                                             const Signal<S>&, const Vector<S>&, S, S, const SimulationOptions&,      \
                                             const Tolerances&);                                                      \
  PREFIX CostTable<S> compare_controls<S>(const FeedbackLaw<S>&, const Signal<S>&,                                    \
                                          const std::vector<ControlAlternative<S>>&, const Vector<S>&, S, S, S,       \
                                          const SimulationOptions&, const Tolerances&);

#ifndef AACONTROL_DEFINE_INSTANTIATIONS
namespace aac {
AACONTROL_INSTANTIATE(extern template, double)
}  // namespace aac
#endif

#endif  // AACONTROL_INSTANTIATIONS_HPP
