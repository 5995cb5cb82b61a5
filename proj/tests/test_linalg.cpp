#include "aacontrol/aacontrol.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace {

using namespace aac;

TEST(MatrixExponential, MatchesLongDoubleSeries) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const long n = 1 + trial % 6;
    const MatrixXd A = oracle::random_gaussian(rng, n, n);
    for (double t : {0.1, 1.0, 3.0}) {
      const MatrixXd E = matrix_exponential(A, t);
      const MatrixXd R = oracle::expm_series(A, t);
      EXPECT_LE((E - R).norm(), 1e-12 * (1 + R.norm())) << "n=" << n << " t=" << t;
    }
  }
}

TEST(MatrixExponential, ScalarAndRotation) {
  EXPECT_NEAR(matrix_exponential(MatrixXd::Constant(1, 1, -5.0), 2.0)(0, 0), std::exp(-10.0), 1e-13 * std::exp(-10.0));
  MatrixXd J(2, 2);
  J << 0, -1, 1, 0;
  const double t = 0.9;
  const MatrixXd E = matrix_exponential(J, t);
  MatrixXd R(2, 2);
  R << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  EXPECT_LE((E - R).norm(), 1e-15);
  EXPECT_EQ(matrix_exponential(MatrixXd::Zero(3, 3)), MatrixXd::Identity(3, 3));
}

TEST(MatrixExponential, SemigroupLaw) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> time(0.0, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const long n = 1 + trial % 5;
    MatrixXd A = oracle::random_gaussian(rng, n, n);
    A *= std::uniform_real_distribution<double>(1.0, 10.0)(rng) / spectral_norm(A);
    const double s = time(rng), t = time(rng);
    const MatrixXd lhs = matrix_exponential(A, s + t);
    const MatrixXd rhs = matrix_exponential(A, s) * matrix_exponential(A, t);
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * (1 + lhs.norm()));
  }
}

TEST(MatrixExponential, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(matrix_exponential(MatrixXd::Zero(2, 3)), Error);
  EXPECT_THROW(matrix_exponential(MatrixXd::Constant(1, 1, NAN)), Error);
  try {
    matrix_exponential(MatrixXd::Constant(1, 1, 1e6));
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSolver);
  }
}

TEST(Sylvester, KroneckerAndSchurAgree) {
  std::mt19937_64 rng(4);
  for (long n : {1, 2, 3, 5, 8, 12, 20}) {
    const MatrixXd A = oracle::with_spectrum(rng, VectorXd::LinSpaced(n, 0.5, 3.0));
    const MatrixXd C = oracle::random_gaussian(rng, n, n);
    const MatrixXd Xk = solve_lyapunov(A, C, SylvesterMethod::kKronecker);
    const MatrixXd Xs = solve_lyapunov(A, C, SylvesterMethod::kSchur);
    EXPECT_LE((Xk - Xs).norm(), 1e-10 * (1 + Xk.norm())) << "n=" << n;
    EXPECT_LE((A * Xk + Xk * A.transpose() - C).norm(), 1e-10 * (1 + C.norm()));
  }
}

TEST(Sylvester, SchurPathAboveKroneckerOrder) {
  std::mt19937_64 rng(6);
  const long n = 30;
  const MatrixXd A = oracle::random_hyperbolic(rng, n);
  const MatrixXd B = oracle::with_spectrum(rng, VectorXd::LinSpaced(12, 4.0, 6.0));
  const MatrixXd C = oracle::random_gaussian(rng, n, 12);
  const MatrixXd X = solve_sylvester(A, B, C);  // auto: max order 30 > 20 selects Schur
  EXPECT_LE((A * X + X * B - C).norm(), 1e-10 * (1 + C.norm()));
  const MatrixXd Xk = solve_sylvester(A, B, C, SylvesterMethod::kKronecker, 400);
  EXPECT_LE((X - Xk).norm(), 1e-10 * (1 + X.norm()));
}

TEST(Sylvester, SingularEquationIsRejected) {
  // A = 1, B = -1: spectra of A and -B collide.
  const MatrixXd A = MatrixXd::Constant(1, 1, 1.0), B = MatrixXd::Constant(1, 1, -1.0);
  const MatrixXd C = MatrixXd::Ones(1, 1);
  for (auto m : {SylvesterMethod::kKronecker, SylvesterMethod::kSchur}) {
    try {
      solve_sylvester(A, B, C, m);
      FAIL() << "expected rejection";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kSolver);
    }
  }
  EXPECT_THROW(solve_sylvester(A, B, MatrixXd(MatrixXd::Ones(2, 1))), Error);
}

TEST(OrderedSchur, SelectedEigenvaluesLeadAndFactorizationHolds) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const long n = 2 + trial % 7;
    const MatrixXd L = oracle::random_hyperbolic(rng, n);
    const auto s = ordered_schur(L, [](std::complex<double> z) { return z.real() < 0; });
    const Eigen::MatrixXcd Lc = L.cast<std::complex<double>>();
    EXPECT_LE((s.U * s.T * s.U.adjoint() - Lc).norm(), 1e-12 * (1 + L.norm()));
    EXPECT_LE((s.U.adjoint() * s.U - Eigen::MatrixXcd::Identity(n, n)).norm(), 1e-13 * n);
    EXPECT_LE(s.T.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 1e-14 * (1 + L.norm()));
    long stable = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool neg = s.T(i, i).real() < 0;
      stable += neg;
      EXPECT_EQ(neg, i < s.selected);
    }
    EXPECT_EQ(stable, s.selected);
  }
}

TEST(OrderedSchur, ProjectorMatchesSignFunctionOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const long n = 1 + trial % 8;
    const MatrixXd L = oracle::random_hyperbolic(rng, n);
    const auto s = ordered_schur(L, [](std::complex<double> z) { return z.real() < 0; });
    const MatrixXd Pi = invariant_subspace_projector(s);
    const MatrixXd ref = oracle::sign_projector(L);
    EXPECT_LE((Pi - ref).norm(), 1e-9 * (1 + ref.norm())) << "n=" << n;
  }
}

}  // namespace
