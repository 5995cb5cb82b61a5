#include "cli.hpp"

#include "io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace aac::cli {

namespace {

using io::Json;
namespace fs = std::filesystem;

/// Bias grid for forcing known only pointwise.
constexpr double kNumericGridSpacing = 0.01;

struct CommonOptions {
  std::string spec_path;
  std::string out_dir;
  std::string variant;
  bool json = false;
};

struct SimulateOptions {
  std::optional<double> t_end;
  std::optional<double> dt;
  std::optional<long> stride;
  std::string gain;
};

struct ExampleOptions {
  std::string variant = "standard";
  std::string forcing = "sin";
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return kUsage;
    case ErrorKind::kHypothesis: return kHypothesis;
    case ErrorKind::kSolver: return kSolver;
    case ErrorKind::kSimulation: return kSimulation;
    case ErrorKind::kIo: return kIo;
  }
  return kUsage;
}

std::string num(double x) { return io::format_number(x); }
std::string mat(const MatrixXd& M) { return io::dump(io::matrix_to_json(M), -1); }
std::string vec(const VectorXd& v) { return io::dump(io::vector_to_json(v), -1); }

std::string trig_text(const TrigPolynomial<double>& p) {
  if (p.empty()) return "0";
  std::ostringstream s;
  bool first = true;
  for (const auto& t : p.terms()) {
    if (!first) s << " + ";
    first = false;
    if (t.omega == 0.0) {
      s << vec(t.cos_coeff);
    } else {
      s << vec(t.cos_coeff) << " cos(" << num(t.omega) << " t) + " << vec(t.sin_coeff) << " sin(" << num(t.omega)
        << " t)";
    }
  }
  return s.str();
}

std::optional<fs::path> output_dir(const CommonOptions& common, const io::ProblemSpec* spec) {
  if (!common.out_dir.empty()) return fs::path(common.out_dir);
  if (spec && spec->output_dir) return spec->output_dir;
  return std::nullopt;
}

io::ProblemSpec load(const CommonOptions& common) {
  io::ProblemSpec spec = io::load_problem(common.spec_path);
  if (!common.variant.empty()) spec.variant = io::variant_from_string(common.variant);
  return spec;
}

/// Prints either the text lines or the JSON report and writes report.json
/// when an output directory is configured.
void emit(std::ostream& out, const CommonOptions& common, const std::optional<fs::path>& dir, const Json& report,
          const std::string& text) {
  if (common.json)
    out << io::dump(report) << '\n';
  else
    out << text;
  if (dir) io::write_json_file(*dir / "report.json", report);
}

Json hypotheses_json(const HypothesisReport<double>& h) {
  return {{"H1_minus_A_stable", h.minus_A_stable},
          {"minus_A_abscissa", h.minus_A_abscissa},
          {"H2_exactly_controllable", h.exactly_controllable},
          {"controllability_rank", h.controllability_rank},
          {"states", h.states}};
}

Json gramian_json(const GramianCertificate<double>& g) {
  return {{"W", io::matrix_to_json(g.W)},
          {"beta", g.beta},
          {"lyapunov_residual", g.lyapunov_residual},
          {"condition", g.condition}};
}

int cmd_check(const CommonOptions& common, std::ostream& out) {
  const auto spec = load(common);
  const auto h = check_hypotheses(spec.system, spec.tolerances);
  Json report{{"command", "check"}, {"hypotheses", hypotheses_json(h)}};
  std::ostringstream text;
  text << "H1 (-A exponentially stable): " << (h.minus_A_stable ? "PASS" : "FAIL") << "  abscissa(-A) = "
       << num(h.minus_A_abscissa) << '\n';
  text << "H2 (exact controllability):   " << (h.exactly_controllable ? "PASS" : "FAIL") << "  Kalman rank "
       << h.controllability_rank << " of " << h.states << '\n';
  if (h.ok()) {
    const auto g = controllability_gramian(spec.system, spec.tolerances);
    report["gramian"] = gramian_json(g);
    text << "Gramian certificate: beta = " << num(g.beta) << ", condition = " << num(g.condition)
         << ", Lyapunov residual = " << num(g.lyapunov_residual) << '\n';
  }
  const char* verdict = h.ok() ? "PASS" : (!h.minus_A_stable ? "FAIL(H1)" : "FAIL(H2)");
  report["result"] = verdict;
  text << "result: " << verdict << '\n';
  emit(out, common, output_dir(common, &spec), report, text.str());
  return h.ok() ? kOk : kHypothesis;
}

int cmd_gramian(const CommonOptions& common, std::ostream& out) {
  const auto spec = load(common);
  const auto g = controllability_gramian(spec.system, spec.tolerances);
  Json report{{"command", "gramian"}, {"gramian", gramian_json(g)}};
  std::ostringstream text;
  text << "W = " << mat(g.W) << '\n'
       << "beta = " << num(g.beta) << '\n'
       << "condition = " << num(g.condition) << '\n'
       << "Lyapunov residual = " << num(g.lyapunov_residual) << '\n';
  emit(out, common, output_dir(common, &spec), report, text.str());
  return kOk;
}

int cmd_solve(const CommonOptions& common, std::ostream& out) {
  const auto spec = load(common);
  const auto sol = solve_are(spec.system, spec.variant, spec.tolerances);
  const MatrixXd L = spec.system.A - spec.system.B * spec.system.B.transpose() * sol.P;
  const auto eig = eigenvalues(L);
  Json spectrum = Json::array();
  for (Eigen::Index i = 0; i < eig.size(); ++i) spectrum.push_back({eig(i).real(), eig(i).imag()});
  Json report{{"command", "solve"}, {"riccati", io::riccati_to_json(sol)}, {"closed_loop_spectrum", spectrum}};
  std::ostringstream text;
  text << "variant: " << to_string(sol.variant) << '\n'
       << "P = " << mat(sol.P) << '\n'
       << "residual = " << num(sol.residual_norm) << '\n'
       << "closed-loop abscissa = " << num(sol.closed_loop_abscissa) << '\n'
       << "closed-loop spectrum = " << io::dump(spectrum, -1) << '\n';
  if (sol.iterations > 0) text << "Newton iterations = " << sol.iterations << '\n';
  emit(out, common, output_dir(common, &spec), report, text.str());
  return kOk;
}

const TrigPolynomial<double>& require_harmonic(const io::ProblemSpec& spec, const char* command) {
  const auto* f = spec.harmonic_forcing();
  if (!f)
    detail::fail(ErrorKind::kInvalidArgument, std::string(command) +
                                                  " needs trigonometric-polynomial forcing; built-in "
                                                  "almost-automorphic forcing is handled by `simulate`");
  return *f;
}

int cmd_synthesize(const CommonOptions& common, std::ostream& out) {
  const auto spec = load(common);
  const auto& f = require_harmonic(spec, "synthesize");
  const auto law = synthesize(spec.system, f, spec.variant, spec.tolerances);
  const auto cost = closed_form_cost(law, f, spec.tolerances);
  Json report{{"command", "synthesize"}, {"law", io::law_to_json(law)}, {"cost", io::cost_to_json(cost)}};
  std::ostringstream text;
  text << "variant: " << to_string(law.riccati.variant) << '\n'
       << "P = " << mat(law.riccati.P) << '\n'
       << "gain K = " << mat(law.gain) << '\n'
       << "r(t) = " << trig_text(law.r) << '\n'
       << "bias b(t) = " << trig_text(law.bias) << '\n'
       << "u(t) = -K y(t) - b(t)\n"
       << "cross term 2<r,f> = " << num(cost.cross_term) << '\n'
       << "penalty term |B'r|^2 = " << num(cost.penalty_term) << '\n'
       << "J = " << num(cost.J) << '\n';
  const auto dir = output_dir(common, &spec);
  emit(out, common, dir, report, text.str());
  if (dir) io::write_json_file(*dir / "law.json", io::law_to_json(law));
  return kOk;
}

int cmd_cost(const CommonOptions& common, const std::string& law_path, std::ostream& out) {
  const auto spec = load(common);
  const auto& f = require_harmonic(spec, "cost");
  const auto law = io::law_from_json(io::read_json_file(law_path), spec.tolerances);
  if (law.system.states() != spec.system.states())
    detail::fail(ErrorKind::kInvalidArgument, "law and spec have different state dimensions");
  const auto closed = closed_form_cost(law, f, spec.tolerances);
  const auto y = closed_loop_trajectory(law, f, spec.tolerances);
  const auto u = realized_control(law, y);
  const auto decomposition = cost_decomposition(u, y, law, f, spec.tolerances);
  const double direct = direct_average_cost(law.system, u, y, spec.tolerances);
  Json report{{"command", "cost"},
              {"closed_form", io::cost_to_json(closed)},
              {"decomposition", io::cost_to_json(decomposition)},
              {"direct_mean", direct}};
  std::ostringstream text;
  text << "cross term 2<r,f> = " << num(closed.cross_term) << '\n'
       << "penalty term |B'r|^2 = " << num(closed.penalty_term) << '\n'
       << "J (closed form) = " << num(closed.J) << '\n'
       << "deviation term at the realized control = " << num(decomposition.deviation_term) << '\n'
       << "J (|My|^2 + |u|^2 mean) = " << num(direct) << '\n';
  emit(out, common, output_dir(common, &spec), report, text.str());
  return kOk;
}

struct SimulationRun {
  Trajectory<double> trajectory;
  double empirical_J = 0;
  double discard_before = 0;
  std::optional<double> closed_form_J;
  MatrixXd gain;
};

SimulationRun run_simulation(const io::ProblemSpec& spec, const std::optional<MatrixXd>& gain_override) {
  const auto& sim = spec.simulation;
  const VectorXd y0 = sim.y0.value_or(VectorXd::Zero(spec.system.states()));
  SimulationOptions opts;
  opts.record_stride = sim.record_stride;
  SimulationRun run;
  MatrixXd closed_loop;
  // The degenerate variant optimizes the control energy alone.
  StateSpace<double> plant = spec.system;
  if (spec.variant == RiccatiVariant::kDegenerate) plant.M.setZero();
  if (const auto* f = spec.harmonic_forcing()) {
    const auto law = synthesize(spec.system, *f, spec.variant, spec.tolerances);
    run.gain = gain_override.value_or(law.gain);
    closed_loop = law.closed_loop;
    if (!gain_override) run.closed_form_J = closed_form_cost(law, *f, spec.tolerances).J;
    run.trajectory = integrate_feedback<double>(plant, run.gain, Signal<double>(law.bias), spec.forcing, y0,
                                                sim.t_end, sim.dt, opts, spec.tolerances);
  } else {
    const double spacing = std::max(sim.dt, kNumericGridSpacing);
    const auto law = synthesize_numeric(spec.system, spec.forcing, sim.t_end, spacing, spec.variant, spec.tolerances);
    run.gain = gain_override.value_or(law.gain);
    closed_loop = law.closed_loop;
    run.trajectory = integrate_feedback<double>(plant, run.gain, Signal<double>(law.bias.as_signal("bias")),
                                                spec.forcing, y0, sim.t_end, sim.dt, opts, spec.tolerances);
  }
  if (sim.discard_transient) run.discard_before = 10.0 / -spectral_abscissa(closed_loop);
  run.empirical_J = empirical_average_cost(run.trajectory, run.discard_before);
  return run;
}

int cmd_simulate(const CommonOptions& common, const SimulateOptions& sopts, std::ostream& out) {
  auto spec = load(common);
  if (sopts.t_end) spec.simulation.t_end = *sopts.t_end;
  if (sopts.dt) spec.simulation.dt = *sopts.dt;
  if (sopts.stride) spec.simulation.record_stride = *sopts.stride;
  if (!(spec.simulation.t_end > 0) || !(spec.simulation.dt > 0) || spec.simulation.record_stride < 1)
    detail::fail(ErrorKind::kInvalidArgument, "t-end, dt and stride must be positive");
  std::optional<MatrixXd> gain;
  if (!sopts.gain.empty()) {
    Json parsed;
    try {
      parsed = Json::parse(sopts.gain);
    } catch (const Json::parse_error&) {
      detail::fail(ErrorKind::kInvalidArgument, "--gain must be a JSON number or matrix");
    }
    gain = io::matrix_from_json(parsed, "gain");
  }
  const auto run = run_simulation(spec, gain);
  Json report{{"command", "simulate"},
              {"t_end", spec.simulation.t_end},
              {"dt", spec.simulation.dt},
              {"gain", io::matrix_to_json(run.gain)},
              {"gain_overridden", gain.has_value()},
              {"discarded_before", run.discard_before},
              {"empirical_J", run.empirical_J}};
  std::ostringstream text;
  text << "gain = " << mat(run.gain) << (gain ? " (override; bias unchanged)" : "") << '\n'
       << "T = " << num(spec.simulation.t_end) << ", dt = " << num(spec.simulation.dt) << '\n'
       << "empirical J_T = " << num(run.empirical_J) << '\n';
  if (run.discard_before > 0) text << "transient window discarded: [0, " << num(run.discard_before) << "]\n";
  if (run.closed_form_J) {
    report["closed_form_J"] = *run.closed_form_J;
    report["abs_error"] = std::abs(run.empirical_J - *run.closed_form_J);
    text << "closed-form J = " << num(*run.closed_form_J) << ", |difference| = "
         << num(std::abs(run.empirical_J - *run.closed_form_J)) << '\n';
  }
  const auto dir = output_dir(common, &spec);
  emit(out, common, dir, report, text.str());
  if (dir) io::write_trajectory_csv(*dir / "trajectory.csv", run.trajectory);
  return kOk;
}

// ---------------------------------------------------------------------------
// Built-in worked example: A = 3, B = 4, M = 1, f = sin t.

struct PinnedCheck {
  std::string name;
  double value;
  double expected;
  double tolerance;
  /// Without a reference value only finiteness and sign are checked.
  bool has_reference = true;
  bool pass() const {
    if (!has_reference) return std::isfinite(value) && value >= 0.0;
    return std::abs(value - expected) <= tolerance;
  }
};

io::ProblemSpec example_spec(const ExampleOptions& opts) {
  io::ProblemSpec spec;
  spec.system = StateSpace<double>(MatrixXd::Constant(1, 1, 3.0), MatrixXd::Constant(1, 1, 4.0),
                                   MatrixXd::Constant(1, 1, 1.0));
  spec.variant = io::variant_from_string(opts.variant);
  if (opts.forcing == "sin") {
    spec.forcing = TrigPolynomial<double>::sine(1.0);
  } else if (opts.forcing == "ap") {
    spec.forcing = TrigPolynomial<double>::sine(1.0) +
                   TrigPolynomial<double>::sine(std::sqrt(2.0));
  } else if (opts.forcing == "aa") {
    spec.forcing = aa_sin_reciprocal<double>();
  } else {
    detail::fail(ErrorKind::kInvalidArgument, "--forcing must be sin, ap or aa");
  }
  return spec;
}

int cmd_example(const CommonOptions& common, const ExampleOptions& eopts, const SimulateOptions& sopts,
                std::ostream& out) {
  auto spec = example_spec(eopts);
  if (sopts.t_end) spec.simulation.t_end = *sopts.t_end;
  if (sopts.dt) spec.simulation.dt = *sopts.dt;
  spec.simulation.record_stride = 1000;
  const bool standard = spec.variant == RiccatiVariant::kStandard;
  const bool sine_forcing = eopts.forcing == "sin";

  std::vector<PinnedCheck> checks;
  Json report{{"command", "example"}, {"variant", eopts.variant}, {"forcing", eopts.forcing}};
  std::ostringstream text;
  std::string stage = "check";
  int code = kOk;
  try {
    const auto h = check_hypotheses(spec.system, spec.tolerances);
    if (!h.ok()) detail::fail(ErrorKind::kHypothesis, "hypotheses H1/H2 fail on the built-in system");
    const auto g = controllability_gramian(spec.system, spec.tolerances);
    report["hypotheses"] = hypotheses_json(h);
    report["beta"] = g.beta;
    text << "[check] H1 PASS, H2 PASS, beta = " << num(g.beta) << '\n';

    stage = "solve";
    const auto sol = solve_are(spec.system, spec.variant, spec.tolerances);
    report["riccati"] = io::riccati_to_json(sol);
    text << "[solve] " << to_string(sol.variant) << " P = " << num(sol.P(0, 0)) << ", residual "
         << num(sol.residual_norm) << '\n';
    checks.push_back({"P", sol.P(0, 0), standard ? 0.5 : 3.0 / 8.0, 1e-12});

    stage = "synthesize";
    if (const auto* f = spec.harmonic_forcing()) {
      const auto law = synthesize(spec.system, *f, spec.variant, spec.tolerances);
      const auto cost = closed_form_cost(law, *f, spec.tolerances);
      report["law"] = io::law_to_json(law);
      report["cost"] = io::cost_to_json(cost);
      text << "[synthesize] u(t) = -" << num(law.gain(0, 0)) << " y(t) - (" << trig_text(law.bias) << ")\n"
           << "[synthesize] r(t) = " << trig_text(law.r) << '\n'
           << "[synthesize] cross term " << num(cost.cross_term) << ", penalty term " << num(cost.penalty_term)
           << ", J " << num(cost.J) << '\n';
      if (standard && sine_forcing) {
        const auto& term = law.r.terms().front();
        checks.push_back({"r cos coefficient", term.cos_coeff(0), 1.0 / 52.0, 1e-12});
        checks.push_back({"r sin coefficient", term.sin_coeff(0), 5.0 / 52.0, 1e-12});
        checks.push_back({"cross term 2<r,f>", cost.cross_term, 5.0 / 52.0, 1e-12});
        checks.push_back({"penalty term |B'r|^2", cost.penalty_term, 4.0 / 52.0, 1e-12});
        checks.push_back({"J", cost.J, 1.0 / 52.0, 1e-12});
        checks.push_back({"gain", law.gain(0, 0), 2.0, 1e-12});
        checks.push_back({"bias cos coefficient", law.bias.terms().front().cos_coeff(0), 1.0 / 13.0, 1e-12});
        checks.push_back({"bias sin coefficient", law.bias.terms().front().sin_coeff(0), 5.0 / 13.0, 1e-12});
      }
      // Starting on the bounded trajectory removes the transient.
      spec.simulation.y0 = closed_loop_trajectory(law, *f, spec.tolerances).evaluate(0.0);
    } else {
      text << "[synthesize] forcing known pointwise: r tabulated by quadrature during simulation\n";
    }

    stage = "simulate";
    const auto run = run_simulation(spec, std::nullopt);
    report["empirical_J"] = run.empirical_J;
    text << "[simulate] T = " << num(spec.simulation.t_end) << ", dt = " << num(spec.simulation.dt)
         << ", empirical J_T = " << num(run.empirical_J) << '\n';
    if (run.closed_form_J)
      checks.push_back({"empirical J_T vs closed form", run.empirical_J, *run.closed_form_J, 1e-3});
    else
      checks.push_back({"empirical J_T finite and non-negative", run.empirical_J, 0.0, 0.0, false});
  } catch (const Error& e) {
    report["failed_stage"] = stage;
    report["error"] = e.what();
    text << "[" << stage << "] FAILED: " << e.what() << '\n';
    code = exit_code(e.kind());
  }

  Json jchecks = Json::array();
  bool all_pass = true;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass();
    Json jc{{"name", c.name}, {"value", c.value}};
    text << (c.pass() ? "PASS " : "FAIL ") << c.name << ": " << num(c.value);
    if (c.has_reference) {
      jc["expected"] = c.expected;
      jc["tolerance"] = c.tolerance;
      text << " (expected " << num(c.expected) << ", tolerance " << num(c.tolerance) << ")";
    }
    jc["pass"] = c.pass();
    jchecks.push_back(std::move(jc));
    text << '\n';
  }
  report["checks"] = std::move(jchecks);
  if (code == kOk && !all_pass) code = kMismatch;
  report["result"] = code == kOk ? "PASS" : "FAIL";
  text << "result: " << (code == kOk ? "PASS" : "FAIL") << '\n';
  emit(out, common, output_dir(common, nullptr), report, text.str());
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Averaged-cost optimal feedback for linear systems with almost-periodic forcing", "aactl"};
  app.require_subcommand(1);

  CommonOptions common;
  SimulateOptions sopts;
  ExampleOptions eopts;
  std::string law_path;

  const auto add_common = [&](CLI::App* sub, bool needs_spec) {
    if (needs_spec) sub->add_option("spec", common.spec_path, "problem spec (JSON)")->required();
    sub->add_option("--out", common.out_dir, "directory for report.json and other artifacts");
    sub->add_flag("--json", common.json, "print the JSON report instead of text");
  };
  const auto add_variant = [&](CLI::App* sub) {
    sub->add_option("--variant", common.variant, "Riccati variant: standard or degenerate")
        ->check(CLI::IsMember({"standard", "degenerate"}));
  };
  const auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--t-end", sopts.t_end, "simulation horizon");
    sub->add_option("--dt", sopts.dt, "RK4 step");
  };

  auto* check = app.add_subcommand("check", "verify -A stable (H1) and exact controllability (H2)");
  add_common(check, true);
  auto* gramian = app.add_subcommand("gramian", "controllability Gramian certificate");
  add_common(gramian, true);
  auto* solve = app.add_subcommand("solve", "solve the Riccati equation");
  add_common(solve, true);
  add_variant(solve);
  auto* synth = app.add_subcommand("synthesize", "optimal feedback law and closed-form cost");
  add_common(synth, true);
  add_variant(synth);
  auto* cost = app.add_subcommand("cost", "recompute the cost terms from a stored law");
  add_common(cost, true);
  cost->add_option("--law", law_path, "law.json written by synthesize")->required();
  auto* simulate = app.add_subcommand("simulate", "integrate the closed loop and measure the average cost");
  add_common(simulate, true);
  add_variant(simulate);
  add_sim(simulate);
  simulate->add_option("--stride", sopts.stride, "record every n-th step");
  simulate->add_option("--gain", sopts.gain, "replace the optimal gain (JSON number or matrix); bias unchanged");
  auto* example = app.add_subcommand("example", "run the built-in scalar example end to end");
  add_common(example, false);
  add_sim(example);
  example->add_option("--variant", eopts.variant, "standard or degenerate")
      ->check(CLI::IsMember({"standard", "degenerate"}));
  example->add_option("--forcing", eopts.forcing, "sin, ap or aa")->check(CLI::IsMember({"sin", "ap", "aa"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(common, out);
    if (*gramian) return cmd_gramian(common, out);
    if (*solve) return cmd_solve(common, out);
    if (*synth) return cmd_synthesize(common, out);
    if (*cost) return cmd_cost(common, law_path, out);
    if (*simulate) return cmd_simulate(common, sopts, out);
    if (*example) return cmd_example(common, eopts, sopts, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace aac::cli
