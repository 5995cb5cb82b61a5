#include "aacontrol/aacontrol.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace aac;

MatrixXd scalar(double x) { return MatrixXd::Constant(1, 1, x); }

StateSpace<double> scalar_system(double a, double b, double m) { return {scalar(a), scalar(b), scalar(m)}; }

double residual_scale(const StateSpace<double>& sys, const MatrixXd& P, bool include_M) {
  const double mm = include_M ? (sys.M.transpose() * sys.M).norm() : 0.0;
  return 1.0 + mm + P.squaredNorm() * (sys.B * sys.B.transpose()).norm();
}

TEST(DegenerateAre, ScalarExample) {
  const auto sol = solve_degenerate_are(scalar_system(3, 4, 1));
  EXPECT_NEAR(sol.P(0, 0), 3.0 / 8.0, 1e-15);
  EXPECT_NEAR(3.0 - 16.0 * sol.P(0, 0), -3.0, 1e-14);
  EXPECT_NEAR(sol.closed_loop_abscissa, -3.0, 1e-14);
  EXPECT_LT(sol.residual_norm, 1e-12);
  EXPECT_EQ(sol.variant, RiccatiVariant::kDegenerate);
  EXPECT_NEAR(sol.w_condition, 1.0, 1e-15);
  EXPECT_LE(sol.oracle_gap, 1e-12);
}

TEST(DegenerateAre, IdentitySystem) {
  const MatrixXd I = MatrixXd::Identity(2, 2);
  const auto sol = solve_degenerate_are(StateSpace<double>(I, I, I));
  EXPECT_LE((sol.P - 2 * I).norm(), 1e-14);
  EXPECT_LT(sol.residual_norm, 1e-10 * (1 + sol.P.norm() * I.norm()));
}

TEST(DegenerateAre, RejectsFailedHypotheses) {
  try {
    solve_degenerate_are(scalar_system(-1, 1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHypothesis);
    EXPECT_NE(std::string(e.what()).find("H1"), std::string::npos);
  }
  MatrixXd A = MatrixXd::Zero(2, 2);
  A.diagonal() << 1, 2;
  MatrixXd B(2, 1);
  B << 1, 0;
  try {
    solve_degenerate_are(StateSpace<double>(A, B, MatrixXd::Identity(2, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kHypothesis);
    EXPECT_NE(std::string(e.what()).find("H2"), std::string::npos);
  }
}

TEST(DegenerateAre, RejectsNumericallySingularGramian) {
  // Nearly repeated eigenvalue with a single input: controllable in exact
  // arithmetic, Gramian condition far above 1e12.
  MatrixXd A = MatrixXd::Zero(2, 2);
  A.diagonal() << 1.0, 1.0 + 1e-7;
  const StateSpace<double> sys(A, MatrixXd::Ones(2, 1), MatrixXd::Identity(2, 2));
  ASSERT_TRUE(check_hypotheses(sys).ok());
  try {
    solve_degenerate_are(sys);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
  }
}

TEST(StandardAre, ScalarExamples) {
  const auto half = solve_standard_are(scalar_system(3, 4, 1));
  EXPECT_NEAR(half.P(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(half.closed_loop_abscissa, -5.0, 1e-12);
  EXPECT_EQ(half.variant, RiccatiVariant::kStandard);

  const auto two = solve_standard_are(scalar_system(3, 4, 2));
  const double expected = (3.0 + std::sqrt(73.0)) / 16.0;
  EXPECT_NEAR(two.P(0, 0), expected, 1e-12);
  EXPECT_LT(std::abs(6 * expected - 16 * expected * expected + 4), 1e-13);
  EXPECT_LT(two.residual_norm, 1e-12);
}

TEST(StandardAre, ZeroWeightCoincidesWithDegenerate) {
  std::mt19937_64 rng(17);
  long redraws = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, MatrixXd::Zero(s.M.rows(), s.M.cols()));
    const auto std_sol = solve_standard_are(sys);
    const auto deg_sol = solve_degenerate_are(sys);
    EXPECT_LE((std_sol.P - deg_sol.P).norm(), 1e-8 * (1 + deg_sol.P.norm()));
  }
}

TEST(StandardAre, SolveAreDispatches) {
  const auto sys = scalar_system(3, 4, 1);
  EXPECT_NEAR(solve_are(sys, RiccatiVariant::kStandard).P(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(solve_are(sys, RiccatiVariant::kDegenerate).P(0, 0), 0.375, 1e-12);
}

TEST(NewtonKleinman, ScalarExamples) {
  const auto sys = scalar_system(3, 4, 1);
  EXPECT_NEAR(newton_kleinman_oracle(sys, true, scalar(2.0))(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(newton_kleinman_oracle(sys, false, scalar(1.0))(0, 0), 3.0 / 8.0, 1e-12);
}

TEST(NewtonKleinman, RejectsNonStabilizingInitialGain) {
  try {
    newton_kleinman_oracle(scalar_system(3, 4, 1), true, scalar(0.5));  // 3 - 4 * 0.5 > 0
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
  }
}

TEST(NewtonKleinman, IterationCapReportsResidualHistory) {
  Tolerances tol;
  tol.newton_max_iterations = 2;
  try {
    newton_kleinman(scalar_system(3, 4, 1), true, scalar(100.0), tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
    EXPECT_NE(std::string(e.what()).find("residuals"), std::string::npos);
  }
}

TEST(NewtonKleinman, BassGainStabilizes) {
  std::mt19937_64 rng(19);
  long redraws = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, s.M);
    const MatrixXd K = bass_stabilizing_gain(sys);
    EXPECT_LT(spectral_abscissa(MatrixXd(sys.A - sys.B * K)), 0.0);
  }
}

// Random suite: n <= 6, m <= 3, spectrum of A in [0.5, 3], B Gaussian and
// rank-checked; draws with Gramian condition above 1e6 are redrawn.
TEST(RandomSuite, DegenerateCertificatesAndOracleAgreement) {
  std::mt19937_64 rng(2024);
  long redraws = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, s.M);
    const auto sol = solve_degenerate_are(sys);
    const double scale = residual_scale(sys, sol.P, false);
    EXPECT_LE(sol.residual_norm, 1e-8 * scale);
    EXPECT_LE((sol.P - sol.P.transpose()).norm(), 1e-12 * sol.P.norm());
    EXPECT_GT(sol.p_min_eigenvalue, 0.0);
    EXPECT_LT(sol.closed_loop_abscissa, 0.0);
    EXPECT_LE(sol.oracle_gap, 1e-8 * (1 + sol.P.norm()));
    // An independent double-precision Newton run from Bass's gain.
    const MatrixXd P_newton = newton_kleinman_oracle(sys, false, bass_stabilizing_gain(sys));
    EXPECT_LE((sol.P - P_newton).norm(), 1e-6 * (1 + sol.P.norm())) << "condition " << s.gramian_condition;
  }
  RecordProperty("redraws", static_cast<int>(redraws));
}

TEST(RandomSuite, NewtonResidualsDecreaseUntilRoundingFloor) {
  std::mt19937_64 rng(77);
  long redraws = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, s.M);
    const auto result = newton_kleinman(sys, true, bass_stabilizing_gain(sys));
    const auto& h = result.residual_history;
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * residual_scale(sys, result.P, true);
    for (std::size_t k = 2; k < h.size(); ++k)
      if (h[k - 1] > floor) {
        EXPECT_LT(h[k], h[k - 1]) << "trial " << trial << " step " << k;
      }
    EXPECT_LE(riccati_residual(sys, result.P, true), 1e-8 * residual_scale(sys, result.P, true));
  }
}

TEST(RandomSuite, StandardCertificates) {
  std::mt19937_64 rng(99);
  long redraws = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, s.M);
    const auto sol = solve_standard_are(sys);
    EXPECT_LE(sol.residual_norm, 1e-8 * residual_scale(sys, sol.P, true));
    EXPECT_GE(sol.p_min_eigenvalue, -1e-10 * sol.P.norm());
    EXPECT_LT(sol.closed_loop_abscissa, 0.0);
  }
}

TEST(GramianRoundTrip, InverseOfPIsTheGramian) {
  std::mt19937_64 rng(5);
  long redraws = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_system(rng, redraws);
    const StateSpace<double> sys(s.A, s.B, s.M);
    const auto g = controllability_gramian(sys);
    ASSERT_GT(g.beta, 0.0);
    const auto sol = solve_degenerate_are(sys);
    const MatrixXd Pinv = sol.P.inverse();
    EXPECT_LE((Pinv - g.W).norm(), 1e-8 * (1 + g.W.norm()));
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (Pinv + Pinv.transpose()), Eigen::EigenvaluesOnly);
    EXPECT_NEAR(eig.eigenvalues()(0), g.beta, 1e-8 * (1 + g.beta));
    EXPECT_LE((g.W - oracle::gramian_kronecker(sys.A, sys.B)).norm(), 1e-10 * (1 + g.W.norm()));
  }
}

TEST(Monotonicity, ScalarWeights) {
  double previous = -1.0;
  for (double m : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double p = solve_standard_are(scalar_system(3, 4, m)).P(0, 0);
    EXPECT_GE(p, previous - 1e-14) << "m=" << m;
    previous = p;
  }
}

TEST(Monotonicity, NestedDiagonalWeights) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ev(0.5, 3.0), w(0.0, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const long n = 1 + trial % 4;
    MatrixXd A = MatrixXd::Zero(n, n);
    for (long i = 0; i < n; ++i) A(i, i) = ev(rng) + 0.3 * i;
    const MatrixXd B = oracle::random_gaussian(rng, n, 1 + trial % 2);
    VectorXd d1(n), d2(n);
    for (long i = 0; i < n; ++i) {
      d1(i) = w(rng);
      d2(i) = d1(i) + w(rng);
    }
    const StateSpace<double> small(A, B, MatrixXd(d1.asDiagonal()));
    const StateSpace<double> large(A, B, MatrixXd(d2.asDiagonal()));
    if (!check_hypotheses(small).ok() || controllability_gramian(small).condition > 1e6) continue;
    const MatrixXd P1 = solve_standard_are(small).P, P2 = solve_standard_are(large).P;
    Eigen::SelfAdjointEigenSolver<MatrixXd> e1(P1, Eigen::EigenvaluesOnly), e2(P2, Eigen::EigenvaluesOnly);
    EXPECT_GE(e2.eigenvalues()(0), e1.eigenvalues()(0) - 1e-10 * (1 + P1.norm()));
  }
}

}  // namespace
