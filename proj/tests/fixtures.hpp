#ifndef AACONTROL_TESTS_FIXTURES_HPP
#define AACONTROL_TESTS_FIXTURES_HPP

// Shared inputs for the suites: the scalar example system and random draws of
// library types. Reference values never come from here.

#include "aacontrol/aacontrol.hpp"
#include "oracles.hpp"

#include <random>
#include <vector>

namespace fixture {

using aac::MatrixXd;
using aac::VectorXd;
using TP = aac::TrigPolynomial<double>;

inline MatrixXd scalar(double x) { return MatrixXd::Constant(1, 1, x); }

/// A = 3, B = 4, M = 1.
inline aac::StateSpace<double> example_system() { return {scalar(3.0), scalar(4.0), scalar(1.0)}; }

inline TP scalar_harmonic(double omega, double c, double s) {
  return TP::harmonic(omega, VectorXd::Constant(1, c), VectorXd::Constant(1, s));
}

/// 1 to max_terms harmonics with frequencies in [lo, hi] and Gaussian coefficients.
inline TP random_trig(std::mt19937_64& rng, Eigen::Index dim, int max_terms, double lo, double hi) {
  std::uniform_int_distribution<int> count(1, max_terms);
  std::uniform_real_distribution<double> freq(lo, hi);
  std::normal_distribution<double> coeff(0.0, 1.0);
  std::vector<aac::HarmonicTerm<double>> terms;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) {
    aac::HarmonicTerm<double> t{freq(rng), VectorXd(dim), VectorXd(dim)};
    for (Eigen::Index j = 0; j < dim; ++j) {
      t.cos_coeff(j) = coeff(rng);
      t.sin_coeff(j) = coeff(rng);
    }
    terms.push_back(t);
  }
  return TP(dim, terms);
}

/// Q diag(d) Q' with d uniform in [lo, hi].
inline MatrixXd random_spd(std::mt19937_64& rng, long n, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  VectorXd d(n);
  for (long i = 0; i < n; ++i) d(i) = U(rng);
  const MatrixXd Q = oracle::random_orthogonal(rng, n);
  return Q * d.asDiagonal() * Q.transpose();
}

/// Non-normal matrix with real spectrum uniform in -[lo, hi].
inline MatrixXd random_stable(std::mt19937_64& rng, long n, double lo = 0.5, double hi = 3.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  VectorXd eig(n);
  for (long i = 0; i < n; ++i) eig(i) = -U(rng);
  return oracle::with_spectrum(rng, eig);
}

/// quadrature_r in long double with half the default step: the reference for
/// instances where |r| is large enough that double rounding in the Simpson
/// sum exceeds the comparison tolerance.
inline MatrixXd wide_quadrature_r(const MatrixXd& L, const MatrixXd& P, const TP& f, const std::vector<double>& times) {
  using W = long double;
  std::vector<aac::HarmonicTerm<W>> terms;
  for (const auto& t : f.terms()) terms.push_back({W(t.omega), t.cos_coeff.cast<W>(), t.sin_coeff.cast<W>()});
  const aac::Matrix<W> Lw = L.cast<W>();
  auto q = aac::default_quadrature<W>(Lw, W(f.max_frequency()));
  q.step /= 2;
  const std::vector<W> wt(times.begin(), times.end());
  return aac::quadrature_r<W>(Lw, P.cast<W>(), aac::Signal<W>(aac::TrigPolynomial<W>(f.dimension(), terms)), wt, q)
      .cast<double>();
}

}  // namespace fixture

#endif  // AACONTROL_TESTS_FIXTURES_HPP
