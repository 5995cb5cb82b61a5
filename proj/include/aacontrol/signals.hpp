#ifndef AACONTROL_SIGNALS_HPP
#define AACONTROL_SIGNALS_HPP

// Almost-periodic signals as finite trigonometric sums, almost-automorphic
// signals as plain evaluators, and the Bohr mean that pairs them.
//
// Phasor convention (used by every closed-form routine in the library):
//   cos_coeff * cos(w t) + sin_coeff * sin(w t) = Re(phasor * exp(i w t)),
//   phasor = cos_coeff - i * sin_coeff.

#include "aacontrol/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aac {

template <typename Scalar>
struct HarmonicTerm {
  Scalar omega{0};
  Vector<Scalar> cos_coeff;
  Vector<Scalar> sin_coeff;

  ComplexVector<Scalar> phasor() const {
    ComplexVector<Scalar> p(cos_coeff.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = {cos_coeff(i), -sin_coeff(i)};
    return p;
  }

  static HarmonicTerm from_phasor(Scalar omega, const ComplexVector<Scalar>& p) {
    HarmonicTerm term{omega, p.real(), -p.imag()};
    if (omega == Scalar(0)) term.sin_coeff.setZero();
    return term;
  }
};

/// Finite sum of vector harmonics with pairwise distinct frequencies, sorted
/// by increasing omega.
template <typename Scalar>
class TrigPolynomial {
 public:
  using Term = HarmonicTerm<Scalar>;

  explicit TrigPolynomial(Eigen::Index dimension = 1) : dimension_(dimension) {
    detail::require(dimension >= 1, ErrorKind::kInvalidArgument, "signal dimension must be positive");
  }

  /// Validates every term and merges frequencies that match within
  /// `frequency_tol` by summing their coefficients.
  TrigPolynomial(Eigen::Index dimension, std::vector<Term> terms, double frequency_tol = Tolerances{}.frequency_tol)
      : TrigPolynomial(dimension) {
    for (const auto& t : terms) {
      detail::require(t.cos_coeff.size() == dimension && t.sin_coeff.size() == dimension,
                      ErrorKind::kInvalidArgument,
                      "harmonic coefficients have dimension " + std::to_string(t.cos_coeff.size()) + "/" +
                          std::to_string(t.sin_coeff.size()) + ", expected " + std::to_string(dimension));
      detail::require(std::isfinite(static_cast<double>(t.omega)) && t.omega >= Scalar(0),
                      ErrorKind::kInvalidArgument, "harmonic frequency must be finite and non-negative");
      detail::require(t.omega != Scalar(0) || t.sin_coeff.isZero(0), ErrorKind::kInvalidArgument,
                      "constant term (omega = 0) cannot carry a sine coefficient");
      detail::require(t.cos_coeff.allFinite() && t.sin_coeff.allFinite(), ErrorKind::kInvalidArgument,
                      "harmonic coefficients must be finite");
    }
    std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.omega < b.omega; });
    for (auto& t : terms) {
      if (!terms_.empty() && frequencies_match(terms_.back().omega, t.omega, frequency_tol)) {
        terms_.back().cos_coeff += t.cos_coeff;
        terms_.back().sin_coeff += t.sin_coeff;
      } else {
        terms_.push_back(std::move(t));
      }
    }
  }

  static TrigPolynomial zero(Eigen::Index dimension) { return TrigPolynomial(dimension); }

  static TrigPolynomial constant(const Vector<Scalar>& value) {
    return TrigPolynomial(value.size(), {Term{Scalar(0), value, Vector<Scalar>::Zero(value.size())}});
  }

  static TrigPolynomial harmonic(Scalar omega, const Vector<Scalar>& cos_coeff, const Vector<Scalar>& sin_coeff) {
    return TrigPolynomial(cos_coeff.size(), {Term{omega, cos_coeff, sin_coeff}});
  }

  /// Scalar sin(omega t) (dimension 1).
  static TrigPolynomial sine(Scalar omega, Scalar amplitude = Scalar(1)) {
    return harmonic(omega, Vector<Scalar>::Zero(1), Vector<Scalar>::Constant(1, amplitude));
  }

  static bool frequencies_match(Scalar a, Scalar b, double tol) {
    using std::abs;
    return abs(a - b) <= Scalar(tol) * std::max({Scalar(1), abs(a), abs(b)});
  }

  Eigen::Index dimension() const { return dimension_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Scalar max_frequency() const { return terms_.empty() ? Scalar(0) : terms_.back().omega; }

  Vector<Scalar> evaluate(Scalar t) const {
    using std::cos;
    using std::sin;
    Vector<Scalar> v = Vector<Scalar>::Zero(dimension_);
    for (const auto& term : terms_) {
      v.noalias() += cos(term.omega * t) * term.cos_coeff;
      if (term.omega != Scalar(0)) v.noalias() += sin(term.omega * t) * term.sin_coeff;
    }
    return v;
  }

  TrigPolynomial derivative() const {
    std::vector<Term> d;
    d.reserve(terms_.size());
    for (const auto& t : terms_)
      if (t.omega != Scalar(0)) d.push_back(Term{t.omega, t.omega * t.sin_coeff, -t.omega * t.cos_coeff});
    return TrigPolynomial(dimension_, std::move(d));
  }

  /// Coefficient-wise image G * p (G has dimension() columns).
  template <typename Derived>
  TrigPolynomial apply(const Eigen::MatrixBase<Derived>& G) const {
    detail::require(G.cols() == dimension_, ErrorKind::kInvalidArgument,
                    "cannot apply a " + detail::shape(G) + " matrix to a signal of dimension " +
                        std::to_string(dimension_));
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(Term{t.omega, G * t.cos_coeff, G * t.sin_coeff});
    return TrigPolynomial(G.rows(), std::move(out));
  }

  /// Frequency-wise complex map phasor -> op(omega, phasor) into a signal of
  /// dimension `out_dimension`.
  template <typename Op>
  TrigPolynomial map_phasors(Eigen::Index out_dimension, Op&& op) const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(Term::from_phasor(t.omega, op(t.omega, t.phasor())));
    return TrigPolynomial(out_dimension, std::move(out));
  }

  friend TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b) {
    check_same_dimension(a, b);
    std::vector<Term> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return TrigPolynomial(a.dimension_, std::move(all));
  }

  friend TrigPolynomial operator*(Scalar c, const TrigPolynomial& p) {
    TrigPolynomial out = p;
    for (auto& t : out.terms_) {
      t.cos_coeff *= c;
      t.sin_coeff *= c;
    }
    return out;
  }

  friend TrigPolynomial operator-(const TrigPolynomial& p) { return Scalar(-1) * p; }
  friend TrigPolynomial operator-(const TrigPolynomial& a, const TrigPolynomial& b) { return a + (-b); }

  /// Crude sup-norm bound: sum over terms of |cos_coeff| + |sin_coeff|.
  Scalar sup_bound() const {
    Scalar s(0);
    for (const auto& t : terms_) s += t.cos_coeff.norm() + t.sin_coeff.norm();
    return s;
  }

  static void check_same_dimension(const TrigPolynomial& a, const TrigPolynomial& b) {
    detail::require(a.dimension_ == b.dimension_, ErrorKind::kInvalidArgument,
                    "signal dimension mismatch: " + std::to_string(a.dimension_) + " vs " +
                        std::to_string(b.dimension_));
  }

 private:
  Eigen::Index dimension_;
  std::vector<Term> terms_;
};

/// Signal known only through point evaluation. The evaluator must be total
/// and bounded on the real line; nothing here proves almost-automorphy.
template <typename Scalar>
struct EvaluableSignal {
  Eigen::Index dimension = 1;
  std::function<Vector<Scalar>(Scalar)> evaluator;
  std::string descriptor;
  /// Known bound on sup_t |f(t)|, or a negative value when unknown.
  Scalar sup_bound = Scalar(-1);

  Vector<Scalar> operator()(Scalar t) const { return evaluator(t); }
};

template <typename Scalar>
using Signal = std::variant<TrigPolynomial<Scalar>, EvaluableSignal<Scalar>>;

template <typename Scalar>
Eigen::Index dimension(const Signal<Scalar>& s) {
  return std::visit([](const auto& v) -> Eigen::Index {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TrigPolynomial<Scalar>>)
      return v.dimension();
    else
      return v.dimension;
  }, s);
}

template <typename Scalar>
Vector<Scalar> evaluate(const Signal<Scalar>& s, Scalar t) {
  return std::visit([t](const auto& v) -> Vector<Scalar> {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TrigPolynomial<Scalar>>)
      return v.evaluate(t);
    else
      return v(t);
  }, s);
}

template <typename Scalar>
Scalar sup_bound(const Signal<Scalar>& s) {
  return std::visit([](const auto& v) -> Scalar {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, TrigPolynomial<Scalar>>)
      return v.sup_bound();
    else
      return v.sup_bound;
  }, s);
}

// ---------------------------------------------------------------------------
// Built-in almost-automorphic signals.
//
// All share the shape  amplitude * direction * g(1 / (shift + h(t) + h(ratio t)))
// with (g, h) = (sin, cos), (cos, cos) or (sin, sin). With shift = 2 the
// denominator is positive except on a measure-zero set it never reaches
// exactly; with shift = 0 the literal textbook forms are recovered. The value
// at an exact zero of the denominator is defined as 0.

enum class ReciprocalKind { kSinOfCos, kCosOfCos, kSinOfSin };

template <typename Scalar>
EvaluableSignal<Scalar> reciprocal_aa_signal(ReciprocalKind kind, Scalar shift, Scalar ratio, Scalar amplitude,
                                             const Vector<Scalar>& direction, std::string descriptor) {
  detail::require(direction.size() >= 1, ErrorKind::kInvalidArgument, "direction must be non-empty");
  EvaluableSignal<Scalar> s;
  s.dimension = direction.size();
  s.descriptor = std::move(descriptor);
  s.sup_bound = std::abs(amplitude) * direction.norm();
  s.evaluator = [=](Scalar t) -> Vector<Scalar> {
    using std::cos;
    using std::sin;
    const Scalar den = kind == ReciprocalKind::kSinOfSin ? shift + sin(t) + sin(ratio * t)
                                                         : shift + cos(t) + cos(ratio * t);
    Scalar value(0);
    if (den != Scalar(0)) value = kind == ReciprocalKind::kCosOfCos ? cos(Scalar(1) / den) : sin(Scalar(1) / den);
    return amplitude * value * direction;
  };
  return s;
}

/// sin(1 / (2 + cos t + cos(sqrt(2) t))), the standard scalar almost-automorphic forcing.
template <typename Scalar>
EvaluableSignal<Scalar> aa_sin_reciprocal(Scalar amplitude = Scalar(1)) {
  using std::sqrt;
  return reciprocal_aa_signal<Scalar>(ReciprocalKind::kSinOfCos, Scalar(2), sqrt(Scalar(2)), amplitude,
                                      Vector<Scalar>::Ones(1), "aa_sin_reciprocal");
}

// ---------------------------------------------------------------------------
// Bohr mean <f, g>_aa = lim (1/T) int_0^T <f(t), g(t)> dt.

/// Exact mean for trigonometric polynomials; only matching frequencies pair.
template <typename Scalar>
Scalar bohr_inner_closed(const TrigPolynomial<Scalar>& p, const TrigPolynomial<Scalar>& q,
                         double frequency_tol = Tolerances{}.frequency_tol) {
  TrigPolynomial<Scalar>::check_same_dimension(p, q);
  Scalar sum(0);
  const auto& a = p.terms();
  const auto& b = q.terms();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (TrigPolynomial<Scalar>::frequencies_match(a[i].omega, b[j].omega, frequency_tol)) {
      if (a[i].omega == Scalar(0) && b[j].omega == Scalar(0))
        sum += a[i].cos_coeff.dot(b[j].cos_coeff);
      else
        sum += Scalar(0.5) * (a[i].cos_coeff.dot(b[j].cos_coeff) + a[i].sin_coeff.dot(b[j].sin_coeff));
      ++i;
      ++j;
    } else if (a[i].omega < b[j].omega) {
      ++i;
    } else {
      ++j;
    }
  }
  return sum;
}

/// (1/T) int_0^T <f, g> dt by the composite trapezoid rule on `samples` nodes.
template <typename Scalar>
Scalar bohr_inner_numeric(const Signal<Scalar>& f, const Signal<Scalar>& g, Scalar horizon, long samples) {
  detail::require(dimension(f) == dimension(g), ErrorKind::kInvalidArgument,
                  "signal dimension mismatch: " + std::to_string(dimension(f)) + " vs " +
                      std::to_string(dimension(g)));
  detail::require(horizon > Scalar(0), ErrorKind::kInvalidArgument, "averaging horizon must be positive");
  detail::require(samples >= 2, ErrorKind::kInvalidArgument, "at least two quadrature samples are required");
  const Scalar h = horizon / Scalar(samples - 1);
  Scalar sum(0);
  for (long k = 0; k < samples; ++k) {
    const Scalar t = (k == samples - 1) ? horizon : Scalar(k) * h;
    const Scalar w = (k == 0 || k == samples - 1) ? Scalar(0.5) : Scalar(1);
    sum += w * evaluate(f, t).dot(evaluate(g, t));
  }
  return sum * h / horizon;
}

template <typename Scalar>
Scalar aa_norm_sq(const TrigPolynomial<Scalar>& p, double frequency_tol = Tolerances{}.frequency_tol) {
  return bohr_inner_closed(p, p, frequency_tol);
}

template <typename Scalar>
Scalar aa_norm_sq(const Signal<Scalar>& f, Scalar horizon, long samples) {
  return bohr_inner_numeric(f, f, horizon, samples);
}

// ---------------------------------------------------------------------------

/// Values on a uniform grid t0 + k * spacing, linearly interpolated in
/// between and clamped outside.
template <typename Scalar>
struct SampledSignal {
  Scalar t0{0};
  Scalar spacing{1};
  Matrix<Scalar> values;  // dimension x count

  Eigen::Index count() const { return values.cols(); }
  Scalar time(Eigen::Index k) const { return t0 + Scalar(k) * spacing; }

  Vector<Scalar> operator()(Scalar t) const {
    using std::floor;
    const Scalar x = (t - t0) / spacing;
    if (x <= Scalar(0)) return values.col(0);
    const Eigen::Index last = values.cols() - 1;
    if (x >= Scalar(last)) return values.col(last);
    const auto k = static_cast<Eigen::Index>(floor(x));
    const Scalar w = x - Scalar(k);
    if (w == Scalar(0)) return values.col(k);
    return (Scalar(1) - w) * values.col(k) + w * values.col(k + 1);
  }

  EvaluableSignal<Scalar> as_signal(std::string descriptor) const {
    auto shared = std::make_shared<const SampledSignal>(*this);
    EvaluableSignal<Scalar> s;
    s.dimension = values.rows();
    s.descriptor = std::move(descriptor);
    s.sup_bound = values.colwise().norm().maxCoeff();
    s.evaluator = [shared](Scalar t) { return (*shared)(t); };
    return s;
  }
};

}  // namespace aac

#endif  // AACONTROL_SIGNALS_HPP
