#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace aac::io {

namespace {

[[noreturn]] void invalid(const std::string& msg) { detail::fail(ErrorKind::kInvalidArgument, msg); }

double number_from_json(const Json& j, const std::string& what) {
  if (!j.is_number()) invalid(what + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) invalid(what + " must be finite");
  return x;
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where + " is missing \"" + key + "\"");
  return j.at(key);
}

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, value, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line so matrices read row by row.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep the token a JSON float so a round trip preserves the type.
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

MatrixXd matrix_from_json(const Json& j, const std::string& what) {
  if (j.is_number()) return MatrixXd::Constant(1, 1, number_from_json(j, what));
  if (!j.is_array() || j.empty()) invalid(what + " must be a number or a non-empty array of rows");
  if (j.front().is_number()) {
    // A flat array is a column vector.
    MatrixXd M(static_cast<Eigen::Index>(j.size()), 1);
    for (std::size_t i = 0; i < j.size(); ++i) M(static_cast<Eigen::Index>(i), 0) = number_from_json(j[i], what);
    return M;
  }
  const std::size_t rows = j.size();
  if (!j.front().is_array() || j.front().empty()) invalid(what + " rows must be non-empty arrays");
  const std::size_t cols = j.front().size();
  MatrixXd M(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) invalid(what + " is ragged: every row needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_from_json(j[r][c], what);
  }
  return M;
}

VectorXd vector_from_json(const Json& j, const std::string& what) {
  const MatrixXd M = matrix_from_json(j, what);
  if (M.cols() == 1) return M.col(0);
  if (M.rows() == 1) return M.row(0).transpose();
  invalid(what + " must be a vector");
}

Json matrix_to_json(const MatrixXd& M) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

TrigPolynomial<double> trig_from_json(const Json& j, const Tolerances& tol) {
  const auto dim_json = member(j, "dimension", "forcing");
  if (!dim_json.is_number_integer() || dim_json.get<long>() < 1) invalid("forcing dimension must be a positive integer");
  const auto dim = static_cast<Eigen::Index>(dim_json.get<long>());
  std::vector<HarmonicTerm<double>> terms;
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) invalid("forcing terms must be an array");
    for (const auto& t : j.at("terms")) {
      HarmonicTerm<double> term;
      term.omega = number_from_json(member(t, "omega", "forcing term"), "omega");
      term.cos_coeff = t.contains("cos") ? vector_from_json(t.at("cos"), "cos") : VectorXd::Zero(dim);
      term.sin_coeff = t.contains("sin") ? vector_from_json(t.at("sin"), "sin") : VectorXd::Zero(dim);
      terms.push_back(std::move(term));
    }
  }
  return TrigPolynomial<double>(dim, std::move(terms), tol.frequency_tol);
}

Json trig_to_json(const TrigPolynomial<double>& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms())
    terms.push_back({{"omega", t.omega}, {"cos", vector_to_json(t.cos_coeff)}, {"sin", vector_to_json(t.sin_coeff)}});
  return {{"dimension", p.dimension()}, {"terms", std::move(terms)}};
}

Signal<double> signal_from_json(const Json& j, Eigen::Index expected_dimension, const Tolerances& tol) {
  if (!j.is_object()) invalid("forcing must be an object");
  Signal<double> s = [&]() -> Signal<double> {
    if (!j.contains("builtin")) return trig_from_json(j, tol);
    const std::string name = j.at("builtin").get<std::string>();
    const Json params = j.value("params", Json::object());
    const double amplitude = params.contains("amplitude") ? number_from_json(params["amplitude"], "amplitude") : 1.0;
    const double shift = params.contains("shift") ? number_from_json(params["shift"], "shift") : 2.0;
    const double ratio = params.contains("ratio") ? number_from_json(params["ratio"], "ratio") : std::sqrt(2.0);
    const VectorXd direction = params.contains("direction") ? vector_from_json(params["direction"], "direction")
                                                            : VectorXd::Ones(expected_dimension);
    ReciprocalKind kind;
    if (name == "aa_sin_reciprocal")
      kind = ReciprocalKind::kSinOfCos;
    else if (name == "aa_cos_reciprocal")
      kind = ReciprocalKind::kCosOfCos;
    else if (name == "aa_sin_reciprocal_sines")
      kind = ReciprocalKind::kSinOfSin;
    else
      invalid("unknown builtin forcing \"" + name + "\"");
    return reciprocal_aa_signal<double>(kind, shift, ratio, amplitude, direction, name);
  }();
  if (dimension(s) != expected_dimension)
    invalid("forcing has dimension " + std::to_string(dimension(s)) + " but the system has " +
            std::to_string(expected_dimension) + " states");
  return s;
}

StateSpace<double> system_from_json(const Json& j) {
  const MatrixXd A = matrix_from_json(member(j, "A", "system"), "A");
  const MatrixXd B = matrix_from_json(member(j, "B", "system"), "B");
  const MatrixXd M = j.contains("M") ? matrix_from_json(j.at("M"), "M") : MatrixXd::Zero(1, A.cols());
  return StateSpace<double>(A, B, M);
}

Json system_to_json(const StateSpace<double>& sys) {
  return {{"A", matrix_to_json(sys.A)}, {"B", matrix_to_json(sys.B)}, {"M", matrix_to_json(sys.M)}};
}

RiccatiVariant variant_from_string(const std::string& s) {
  if (s == "standard") return RiccatiVariant::kStandard;
  if (s == "degenerate") return RiccatiVariant::kDegenerate;
  invalid("variant must be \"standard\" or \"degenerate\", got \"" + s + "\"");
}

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  if (!j.is_object()) invalid("tolerances must be an object");
  for (const auto& [key, value] : j.items()) {
    const double x = number_from_json(value, "tolerance " + key);
    if (!(x > 0)) invalid("tolerance " + key + " must be positive");
    if (key == "stability_margin") base.stability_margin = x;
    else if (key == "hyperbolicity_margin") base.hyperbolicity_margin = x;
    else if (key == "frequency_tol") base.frequency_tol = x;
    else if (key == "rank_tol") base.rank_tol = x;
    else if (key == "max_gramian_condition") base.max_gramian_condition = x;
    else if (key == "newton_max_iterations") base.newton_max_iterations = static_cast<int>(x);
    else if (key == "newton_tol") base.newton_tol = x;
    else if (key == "oracle_agreement") base.oracle_agreement = x;
    else if (key == "kronecker_max_order") base.kronecker_max_order = static_cast<int>(x);
    else if (key == "rk4_step_bound") base.rk4_step_bound = x;
    else invalid("unknown tolerance \"" + key + "\"");
  }
  return base;
}

ProblemSpec problem_from_json(const Json& j) {
  if (!j.is_object()) invalid("problem spec must be a JSON object");
  ProblemSpec spec;
  spec.system = system_from_json(member(j, "system", "problem spec"));
  const Json options = j.value("options", Json::object());
  if (!options.is_object()) invalid("options must be an object");
  if (options.contains("tolerances")) spec.tolerances = tolerances_from_json(options.at("tolerances"));
  if (options.contains("variant")) spec.variant = variant_from_string(options.at("variant").get<std::string>());
  if (options.contains("output_dir")) spec.output_dir = options.at("output_dir").get<std::string>();
  if (options.contains("simulation")) {
    const Json& sim = options.at("simulation");
    auto& s = spec.simulation;
    if (sim.contains("t_end")) s.t_end = number_from_json(sim.at("t_end"), "t_end");
    if (sim.contains("dt")) s.dt = number_from_json(sim.at("dt"), "dt");
    if (sim.contains("y0")) s.y0 = vector_from_json(sim.at("y0"), "y0");
    if (sim.contains("record_stride")) s.record_stride = sim.at("record_stride").get<long>();
    if (sim.contains("discard_transient")) s.discard_transient = sim.at("discard_transient").get<bool>();
    if (!(s.t_end > 0) || !(s.dt > 0) || s.record_stride < 1)
      invalid("simulation t_end, dt and record_stride must be positive");
    if (s.y0 && s.y0->size() != spec.system.states()) invalid("y0 does not match the state dimension");
  }
  const Json forcing = j.contains("forcing") ? j.at("forcing") : Json{{"dimension", spec.system.states()}};
  spec.forcing = signal_from_json(forcing, spec.system.states(), spec.tolerances);
  return spec;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::fail(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid("malformed JSON in " + path.string() + ": " + e.what());
  }
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  try {
    return problem_from_json(read_json_file(path));
  } catch (const Json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
}

Json riccati_to_json(const RiccatiSolution<double>& sol) {
  Json j{{"variant", to_string(sol.variant)},
         {"P", matrix_to_json(sol.P)},
         {"residual_norm", sol.residual_norm},
         {"closed_loop_abscissa", sol.closed_loop_abscissa},
         {"p_min_eigenvalue", sol.p_min_eigenvalue},
         {"iterations", sol.iterations}};
  if (std::isfinite(sol.w_condition)) j["gramian_condition"] = sol.w_condition;
  if (std::isfinite(sol.oracle_gap)) j["oracle_gap"] = sol.oracle_gap;
  if (!sol.residual_history.empty()) {
    Json h = Json::array();
    for (double r : sol.residual_history) h.push_back(r);
    j["residual_history"] = std::move(h);
  }
  return j;
}

Json cost_to_json(const CostReport<double>& c) {
  Json j{{"method", to_string(c.method)}, {"J", c.J}, {"cross_term", c.cross_term}, {"penalty_term", c.penalty_term}};
  if (c.method == CostMethod::kDecomposition) j["deviation_term"] = c.deviation_term;
  return j;
}

Json law_to_json(const FeedbackLaw<double>& law) {
  return {{"system", system_to_json(law.system)},
          {"riccati", riccati_to_json(law.riccati)},
          {"gain", matrix_to_json(law.gain)},
          {"closed_loop", matrix_to_json(law.closed_loop)},
          {"r", trig_to_json(law.r)},
          {"bias", trig_to_json(law.bias)}};
}

FeedbackLaw<double> law_from_json(const Json& j, const Tolerances& tol) {
  try {
    FeedbackLaw<double> law;
    law.system = system_from_json(member(j, "system", "law"));
    const Json& ric = member(j, "riccati", "law");
    law.riccati.variant = variant_from_string(member(ric, "variant", "law riccati").get<std::string>());
    law.riccati.P = matrix_from_json(member(ric, "P", "law riccati"), "P");
    law.gain = matrix_from_json(member(j, "gain", "law"), "gain");
    law.closed_loop = matrix_from_json(member(j, "closed_loop", "law"), "closed_loop");
    law.r = trig_from_json(member(j, "r", "law"), tol);
    law.bias = trig_from_json(member(j, "bias", "law"), tol);
    const auto n = law.system.states();
    const auto m = law.system.inputs();
    if (law.riccati.P.rows() != n || law.riccati.P.cols() != n || law.gain.rows() != m || law.gain.cols() != n ||
        law.closed_loop.rows() != n || law.closed_loop.cols() != n || law.r.dimension() != n ||
        law.bias.dimension() != m)
      invalid("law dimensions are inconsistent with its system");
    const MatrixXd expected_gain = law.system.B.transpose() * law.riccati.P;
    if ((law.gain - expected_gain).norm() > 1e-9 * (1.0 + expected_gain.norm()))
      invalid("law gain differs from B'P");
    return law;
  } catch (const Json::exception& e) {
    invalid(std::string("law: ") + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) detail::fail(ErrorKind::kIo, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) detail::fail(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) detail::fail(ErrorKind::kIo, "write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, dump(j) + "\n"); }

void write_trajectory_csv(std::ostream& out, const Trajectory<double>& traj) {
  const Eigen::Index n = traj.states.rows(), m = traj.controls.rows();
  out << 't';
  for (Eigen::Index i = 1; i <= n; ++i) out << ",y_" << i;
  for (Eigen::Index i = 1; i <= m; ++i) out << ",u_" << i;
  out << ",running_cost\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out << format_number(traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_number(traj.states(i, col));
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << format_number(traj.controls(i, col));
    out << ',' << format_number(traj.running_cost[k]) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory<double>& traj) {
  std::ostringstream s;
  write_trajectory_csv(s, traj);
  write_text_file(path, s.str());
}

}  // namespace aac::io
