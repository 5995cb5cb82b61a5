#ifndef AACONTROL_IO_HPP
#define AACONTROL_IO_HPP

// JSON and CSV plumbing for the command-line front end. Everything here is
// double precision; matrices are row-major nested arrays and a bare number is
// read as a 1x1 matrix.

#include "aacontrol/aacontrol.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace aac::io {

using Json = nlohmann::ordered_json;

MatrixXd matrix_from_json(const Json& j, const std::string& what);
VectorXd vector_from_json(const Json& j, const std::string& what);
Json matrix_to_json(const MatrixXd& M);
Json vector_to_json(const VectorXd& v);

/// {"dimension": n, "terms": [{"omega": w, "cos": [...], "sin": [...]}]}
TrigPolynomial<double> trig_from_json(const Json& j, const Tolerances& tol);
Json trig_to_json(const TrigPolynomial<double>& p);

/// Trigonometric form above, or {"builtin": name, "params": {...}} for the
/// almost-automorphic built-ins aa_sin_reciprocal, aa_cos_reciprocal and
/// aa_sin_reciprocal_sines.
Signal<double> signal_from_json(const Json& j, Eigen::Index expected_dimension, const Tolerances& tol);

StateSpace<double> system_from_json(const Json& j);
Json system_to_json(const StateSpace<double>& sys);

struct SimulationSettings {
  double t_end = 2000.0;
  double dt = 1e-3;
  std::optional<VectorXd> y0;  // defaults to the zero state
  long record_stride = 100;
  bool discard_transient = false;
};

struct ProblemSpec {
  StateSpace<double> system;
  Signal<double> forcing;
  RiccatiVariant variant = RiccatiVariant::kStandard;
  Tolerances tolerances;
  SimulationSettings simulation;
  std::optional<std::filesystem::path> output_dir;

  /// The forcing as a trigonometric polynomial, or nullptr for built-ins.
  const TrigPolynomial<double>* harmonic_forcing() const { return std::get_if<TrigPolynomial<double>>(&forcing); }
};

RiccatiVariant variant_from_string(const std::string& s);
Tolerances tolerances_from_json(const Json& j, Tolerances base = {});

ProblemSpec problem_from_json(const Json& j);
Json read_json_file(const std::filesystem::path& path);
ProblemSpec load_problem(const std::filesystem::path& path);

Json riccati_to_json(const RiccatiSolution<double>& sol);
Json cost_to_json(const CostReport<double>& c);
Json law_to_json(const FeedbackLaw<double>& law);
FeedbackLaw<double> law_from_json(const Json& j, const Tolerances& tol);

/// Fixed 17-significant-digit rendering; identical input gives identical
/// bytes. Non-finite numbers become null.
std::string dump(const Json& j, int indent = 2);
std::string format_number(double x);

void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Columns t, y_1..y_n, u_1..u_m, running_cost.
void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory<double>& traj);

}  // namespace aac::io

#endif  // AACONTROL_IO_HPP
