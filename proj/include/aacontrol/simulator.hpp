#ifndef AACONTROL_SIMULATOR_HPP
#define AACONTROL_SIMULATOR_HPP

// Fixed-step RK4 integration of y' = A y + B u + f under u = -K y - b(t),
// with the running average cost (1/t) int_0^t (|M y|^2 + |u|^2) accumulated
// by the trapezoid rule on every step.

#include "aacontrol/config.hpp"
#include "aacontrol/linalg.hpp"
#include "aacontrol/signals.hpp"
#include "aacontrol/spectral.hpp"
#include "aacontrol/synthesis.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace aac {

template <typename Scalar>
struct Trajectory {
  std::vector<Scalar> times;
  Matrix<Scalar> states;    // n x samples
  Matrix<Scalar> controls;  // m x samples
  std::vector<Scalar> running_cost;

  std::size_t size() const { return times.size(); }
};

struct SimulationOptions {
  /// Keep every `record_stride`-th step (the final step is always kept).
  long record_stride = 1;
};

/// Integrates with an arbitrary gain and bias signal; the building block of
/// every simulation entry point.
template <typename Scalar>
Trajectory<Scalar> integrate_feedback(const StateSpace<Scalar>& sys, const Matrix<Scalar>& gain,
                                      const Signal<Scalar>& bias, const Signal<Scalar>& f, const Vector<Scalar>& y0,
                                      Scalar t_end, Scalar dt, const SimulationOptions& opts = {},
                                      const Tolerances& tol = {}) {
  sys.validate();
  const Eigen::Index n = sys.states(), m = sys.inputs();
  detail::require(gain.rows() == m && gain.cols() == n, ErrorKind::kInvalidArgument,
                  "gain must be " + std::to_string(m) + "x" + std::to_string(n) + ", got " + detail::shape(gain));
  detail::require(dimension(bias) == m && dimension(f) == n && y0.size() == n, ErrorKind::kInvalidArgument,
                  "bias, forcing or initial state has the wrong dimension");
  detail::require(dt > Scalar(0) && t_end > Scalar(0), ErrorKind::kSimulation, "dt and t_end must be positive");
  detail::require(opts.record_stride >= 1, ErrorKind::kInvalidArgument, "record stride must be positive");
  const Matrix<Scalar> L = sys.A - sys.B * gain;
  const Scalar norm = spectral_norm(L);
  if (dt * norm > Scalar(tol.rk4_step_bound))
    detail::fail(ErrorKind::kSimulation, "step size " + std::to_string(static_cast<double>(dt)) +
                                             " too large for |A - BK| = " + std::to_string(static_cast<double>(norm)) +
                                             "; use dt <= " +
                                             std::to_string(static_cast<double>(Scalar(tol.rk4_step_bound) / norm)));

  const long steps = static_cast<long>(std::ceil(t_end / dt - Scalar(1e-9)));
  const long stride = opts.record_stride;
  const long samples = steps / stride + 1 + (steps % stride ? 1 : 0);
  Trajectory<Scalar> traj;
  traj.times.reserve(samples);
  traj.running_cost.reserve(samples);
  traj.states.resize(n, samples);
  traj.controls.resize(m, samples);

  auto control = [&](const Vector<Scalar>& y, Scalar t) -> Vector<Scalar> { return -gain * y - evaluate(bias, t); };
  auto rhs = [&](const Vector<Scalar>& y, Scalar t) -> Vector<Scalar> {
    return L * y - sys.B * evaluate(bias, t) + evaluate(f, t);
  };
  auto integrand = [&](const Vector<Scalar>& y, const Vector<Scalar>& u) {
    return (sys.M * y).squaredNorm() + u.squaredNorm();
  };

  Vector<Scalar> y = y0;
  Vector<Scalar> u = control(y, Scalar(0));
  Scalar h_prev = integrand(y, u);
  Scalar integral(0);
  Eigen::Index col = 0;
  auto record = [&](Scalar t) {
    traj.times.push_back(t);
    traj.states.col(col) = y;
    traj.controls.col(col) = u;
    traj.running_cost.push_back(t > Scalar(0) ? integral / t : h_prev);
    ++col;
  };
  record(Scalar(0));
  for (long k = 0; k < steps; ++k) {
    const Scalar t = Scalar(k) * dt;
    const Vector<Scalar> k1 = rhs(y, t);
    const Vector<Scalar> k2 = rhs(y + (dt / 2) * k1, t + dt / 2);
    const Vector<Scalar> k3 = rhs(y + (dt / 2) * k2, t + dt / 2);
    const Vector<Scalar> k4 = rhs(y + dt * k3, t + dt);
    y += (dt / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    const Scalar t_next = Scalar(k + 1) * dt;
    detail::require(y.allFinite(), ErrorKind::kSimulation,
                    "trajectory diverged at t = " + std::to_string(static_cast<double>(t_next)));
    u = control(y, t_next);
    const Scalar h = integrand(y, u);
    integral += (dt / 2) * (h_prev + h);
    h_prev = h;
    if ((k + 1) % stride == 0 || k + 1 == steps) record(t_next);
  }
  traj.states.conservativeResize(n, col);
  traj.controls.conservativeResize(m, col);
  return traj;
}

template <typename Scalar>
Trajectory<Scalar> integrate_closed_loop(const FeedbackLaw<Scalar>& law, const Signal<Scalar>& f,
                                         const Vector<Scalar>& y0, Scalar t_end, Scalar dt,
                                         const SimulationOptions& opts = {}, const Tolerances& tol = {}) {
  return integrate_feedback<Scalar>(law.system, law.gain, Signal<Scalar>(law.bias), f, y0, t_end, dt, opts, tol);
}

template <typename Scalar>
Trajectory<Scalar> integrate_closed_loop(const NumericFeedbackLaw<Scalar>& law, const Signal<Scalar>& f,
                                         const Vector<Scalar>& y0, Scalar t_end, Scalar dt,
                                         const SimulationOptions& opts = {}, const Tolerances& tol = {}) {
  return integrate_feedback<Scalar>(law.system, law.gain, Signal<Scalar>(law.bias.as_signal("bias")), f, y0, t_end,
                                    dt, opts, tol);
}

/// J_T at the final time. With `discard_before` > 0 the window [0, t0] is
/// dropped, t0 being the last recorded time not after `discard_before`.
template <typename Scalar>
Scalar empirical_average_cost(const Trajectory<Scalar>& traj, Scalar discard_before = Scalar(0)) {
  detail::require(!traj.times.empty(), ErrorKind::kSimulation, "empty trajectory");
  const Scalar T = traj.times.back();
  const Scalar J_T = traj.running_cost.back();
  if (discard_before <= Scalar(0)) return J_T;
  std::size_t k = 0;
  while (k + 1 < traj.times.size() && traj.times[k + 1] <= discard_before) ++k;
  const Scalar t0 = traj.times[k];
  detail::require(t0 < T, ErrorKind::kSimulation, "transient window covers the whole trajectory");
  return (T * J_T - t0 * traj.running_cost[k]) / (T - t0);
}

template <typename Scalar>
struct ControlAlternative {
  std::string label;
  Matrix<Scalar> gain;
  TrigPolynomial<Scalar> bias;
};

enum class RowStatus { kOk, kDivergent, kRejected };

inline const char* to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kDivergent: return "divergent";
    case RowStatus::kRejected: return "rejected";
  }
  return "unknown";
}

template <typename Scalar>
struct CostRow {
  std::string label;
  Scalar J = std::numeric_limits<Scalar>::quiet_NaN();
  RowStatus status = RowStatus::kOk;
  bool synthesized = false;
  std::string note;
};

template <typename Scalar>
struct CostTable {
  std::vector<CostRow<Scalar>> rows;  // synthesized law first
  bool synthesized_is_min = true;
};

/// Same closed-loop formula as the synthesized law, re-solved for another gain:
/// b = B' r_K with r_K the adjoint signal of A - B K.
template <typename Scalar>
ControlAlternative<Scalar> alternative_with_resolved_bias(const FeedbackLaw<Scalar>& law,
                                                          const TrigPolynomial<Scalar>& f, const Matrix<Scalar>& gain,
                                                          std::string label, const Tolerances& tol = {}) {
  const Matrix<Scalar> L = law.system.A - law.system.B * gain;
  const auto r = solve_r_harmonic<Scalar>(L, law.riccati.P, f, tol);
  return {std::move(label), gain, r.apply(law.system.B.transpose())};
}

template <typename Scalar>
CostTable<Scalar> compare_controls(const FeedbackLaw<Scalar>& law, const Signal<Scalar>& f,
                                   const std::vector<ControlAlternative<Scalar>>& alternatives,
                                   const Vector<Scalar>& y0, Scalar t_end, Scalar dt, Scalar tolerance = Scalar(1e-4),
                                   const SimulationOptions& opts = {}, const Tolerances& tol = {}) {
  CostTable<Scalar> table;
  std::vector<ControlAlternative<Scalar>> all;
  all.push_back({"synthesized", law.gain, law.bias});
  all.insert(all.end(), alternatives.begin(), alternatives.end());
  SimulationOptions sparse = opts;
  sparse.record_stride = std::max<long>(opts.record_stride, static_cast<long>(std::ceil(t_end / dt)));
  for (std::size_t i = 0; i < all.size(); ++i) {
    CostRow<Scalar> row;
    row.label = all[i].label;
    row.synthesized = i == 0;
    try {
      const Scalar abscissa = spectral_abscissa(Matrix<Scalar>(law.system.A - law.system.B * all[i].gain));
      if (!(abscissa < -Scalar(tol.stability_margin))) {
        row.status = RowStatus::kDivergent;
        row.note = "closed loop unstable (abscissa " + std::to_string(static_cast<double>(abscissa)) + ")";
      } else {
        const auto traj =
            integrate_feedback<Scalar>(law.system, all[i].gain, Signal<Scalar>(all[i].bias), f, y0, t_end, dt, sparse, tol);
        row.J = empirical_average_cost(traj);
      }
    } catch (const Error& e) {
      row.status = RowStatus::kRejected;
      row.note = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  const auto& best = table.rows.front();
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (table.rows[i].status == RowStatus::kOk &&
        (best.status != RowStatus::kOk || table.rows[i].J < best.J - tolerance))
      table.synthesized_is_min = false;
  return table;
}

}  // namespace aac

#endif  // AACONTROL_SIMULATOR_HPP
