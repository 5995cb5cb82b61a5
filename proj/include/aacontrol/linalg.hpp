#ifndef AACONTROL_LINALG_HPP
#define AACONTROL_LINALG_HPP

// Dense kernels: matrix exponential, Sylvester/Lyapunov solvers (Kronecker
// and Bartels-Stewart), and reordered complex Schur forms.

#include "aacontrol/config.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace aac {

/// e^{tA} by scaling and squaring with the degree-13 Pade approximant.
template <typename Derived>
Matrix<typename Derived::Scalar> matrix_exponential(const Eigen::MatrixBase<Derived>& A,
                                                    typename Derived::Scalar t = 1) {
  using Scalar = typename Derived::Scalar;
  using std::ceil;
  using std::log2;
  detail::require(A.rows() == A.cols(), ErrorKind::kInvalidArgument,
                  "matrix exponential needs a square matrix, got " + detail::shape(A));
  const Eigen::Index n = A.rows();
  const Matrix<Scalar> X = t * A;
  const Scalar norm1 = X.cwiseAbs().colwise().sum().maxCoeff();
  detail::require(std::isfinite(static_cast<double>(norm1)), ErrorKind::kSolver,
                  "matrix exponential: non-finite input");
  const Matrix<Scalar> I = Matrix<Scalar>::Identity(n, n);
  if (norm1 == Scalar(0)) return I;

  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  const Scalar theta13(5.371920351148152);
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(ceil(log2(norm1 / theta13)));
  detail::require(s <= 1000, ErrorKind::kSolver,
                  "matrix exponential: |tA|_1 = " + std::to_string(static_cast<double>(norm1)) + " is out of range");

  const Matrix<Scalar> As = X / std::ldexp(Scalar(1), s);
  const Matrix<Scalar> A2 = As * As;
  const Matrix<Scalar> A4 = A2 * A2;
  const Matrix<Scalar> A6 = A4 * A2;
  const Matrix<Scalar> inner_u = Scalar(b[13]) * A6 + Scalar(b[11]) * A4 + Scalar(b[9]) * A2;
  const Matrix<Scalar> inner_v = Scalar(b[12]) * A6 + Scalar(b[10]) * A4 + Scalar(b[8]) * A2;
  const Matrix<Scalar> U =
      As * (A6 * inner_u + Scalar(b[7]) * A6 + Scalar(b[5]) * A4 + Scalar(b[3]) * A2 + Scalar(b[1]) * I);
  const Matrix<Scalar> V =
      A6 * inner_v + Scalar(b[6]) * A6 + Scalar(b[4]) * A4 + Scalar(b[2]) * A2 + Scalar(b[0]) * I;
  Matrix<Scalar> R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  detail::require(R.allFinite(), ErrorKind::kSolver,
                  "matrix exponential overflow: |tA|_1 = " + std::to_string(static_cast<double>(norm1)));
  return R;
}

/// Largest singular value.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  if (A.size() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(A.eval());
  return svd.singularValues()(0);
}

enum class SylvesterMethod { kAuto, kKronecker, kSchur };

namespace detail {

/// Solves T Y + Y S = F for upper-triangular complex T, S by column sweeps.
template <typename Complex>
Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> triangular_sylvester(
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>& T,
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>& S,
    const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>& F) {
  using Real = typename Complex::value_type;
  using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = T.rows(), m = S.rows();
  const Real scale = T.norm() + S.norm() + Real(1);
  const Real floor = Real(100) * std::numeric_limits<Real>::epsilon() * scale;
  CMat Y(n, m);
  CMat shifted = T;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      shifted(i, i) = T(i, i) + S(j, j);
      require(std::abs(shifted(i, i)) > floor, ErrorKind::kSolver,
              "Sylvester equation is singular: the spectra of the coefficient matrices meet "
              "(lambda + mu = 0 within rounding)");
    }
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> rhs = F.col(j);
    if (j > 0) rhs.noalias() -= Y.leftCols(j) * S.col(j).head(j);
    Y.col(j) = shifted.template triangularView<Eigen::Upper>().solve(rhs);
  }
  return Y;
}

}  // namespace detail

/// X with A X + X B = C via the vectorized (I kron A + B' kron I) system.
template <typename Scalar>
Matrix<Scalar> sylvester_kronecker(const Matrix<Scalar>& A, const Matrix<Scalar>& B, const Matrix<Scalar>& C) {
  const Eigen::Index n = A.rows(), m = B.rows();
  Matrix<Scalar> K = Matrix<Scalar>::Zero(n * m, n * m);
  for (Eigen::Index j = 0; j < m; ++j) {
    K.block(j * n, j * n, n, n) += A;
    for (Eigen::Index k = 0; k < m; ++k)
      K.block(j * n, k * n, n, n).diagonal().array() += B(k, j);
  }
  Eigen::PartialPivLU<Matrix<Scalar>> lu(K);
  const Scalar rcond = lu.rcond();
  detail::require(rcond > std::numeric_limits<Scalar>::epsilon(), ErrorKind::kSolver,
                  "Sylvester equation is singular (Kronecker system rcond " +
                      std::to_string(static_cast<double>(rcond)) + ")");
  const Vector<Scalar> x = lu.solve(Eigen::Map<const Vector<Scalar>>(C.data(), n * m));
  return Eigen::Map<const Matrix<Scalar>>(x.data(), n, m);
}

/// X with A X + X B = C via complex Schur forms of A and B (Bartels-Stewart).
template <typename Scalar>
Matrix<Scalar> sylvester_schur(const Matrix<Scalar>& A, const Matrix<Scalar>& B, const Matrix<Scalar>& C) {
  Eigen::ComplexSchur<Matrix<Scalar>> sa(A), sb(B);
  detail::require(sa.info() == Eigen::Success && sb.info() == Eigen::Success, ErrorKind::kSolver,
                  "Schur decomposition did not converge");
  const ComplexMatrix<Scalar>& U = sa.matrixU();
  const ComplexMatrix<Scalar>& V = sb.matrixU();
  const ComplexMatrix<Scalar> F = U.adjoint() * C.template cast<std::complex<Scalar>>() * V;
  const ComplexMatrix<Scalar> Y = detail::triangular_sylvester<std::complex<Scalar>>(sa.matrixT(), sb.matrixT(), F);
  return (U * Y * V.adjoint()).real();
}

template <typename Scalar>
Matrix<Scalar> solve_sylvester(const Matrix<Scalar>& A, const Matrix<Scalar>& B, const Matrix<Scalar>& C,
                               SylvesterMethod method = SylvesterMethod::kAuto,
                               int kronecker_max_order = Tolerances{}.kronecker_max_order) {
  detail::require(A.rows() == A.cols() && B.rows() == B.cols() && C.rows() == A.rows() && C.cols() == B.rows(),
                  ErrorKind::kInvalidArgument,
                  "Sylvester shapes inconsistent: A " + detail::shape(A) + ", B " + detail::shape(B) + ", C " +
                      detail::shape(C));
  if (method == SylvesterMethod::kAuto)
    method = std::max(A.rows(), B.rows()) <= kronecker_max_order ? SylvesterMethod::kKronecker
                                                                 : SylvesterMethod::kSchur;
  return method == SylvesterMethod::kKronecker ? sylvester_kronecker(A, B, C) : sylvester_schur(A, B, C);
}

/// X with A X + X A' = C.
template <typename Scalar>
Matrix<Scalar> solve_lyapunov(const Matrix<Scalar>& A, const Matrix<Scalar>& C,
                              SylvesterMethod method = SylvesterMethod::kAuto,
                              int kronecker_max_order = Tolerances{}.kronecker_max_order) {
  return solve_sylvester<Scalar>(A, A.transpose(), C, method, kronecker_max_order);
}

/// Complex Schur form L = U T U* whose leading `selected` diagonal entries are
/// exactly those satisfying the predicate.
template <typename Scalar>
struct OrderedSchur {
  ComplexMatrix<Scalar> U;
  ComplexMatrix<Scalar> T;
  Eigen::Index selected = 0;
};

template <typename Scalar, typename Predicate>
OrderedSchur<Scalar> ordered_schur(const Matrix<Scalar>& L, Predicate&& select) {
  using Complex = std::complex<Scalar>;
  Eigen::ComplexSchur<Matrix<Scalar>> schur(L);
  detail::require(schur.info() == Eigen::Success, ErrorKind::kSolver, "Schur decomposition did not converge");
  OrderedSchur<Scalar> out{schur.matrixU(), schur.matrixT(), 0};
  auto& T = out.T;
  auto& U = out.U;
  const Eigen::Index n = T.rows();
  // Moves eigenvalue j+1 above eigenvalue j with one unitary rotation whose
  // first column is the eigenvector of the trailing entry.
  auto swap_down = [&](Eigen::Index j) {
    const Complex a = T(j, j), c = T(j + 1, j + 1);
    Eigen::JacobiRotation<Complex> G;
    G.makeGivens(T(j, j + 1), c - a);
    T.applyOnTheLeft(j, j + 1, G.adjoint());
    T.applyOnTheRight(j, j + 1, G);
    U.applyOnTheRight(j, j + 1, G);
    T(j + 1, j) = Complex(0);
    T(j, j) = c;
    T(j + 1, j + 1) = a;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!select(T(i, i))) continue;
    for (Eigen::Index j = i - 1; j >= out.selected; --j) swap_down(j);
    ++out.selected;
  }
  return out;
}

/// Spectral projector onto the invariant subspace spanned by the leading
/// `selected` Schur vectors, along the complementary invariant subspace.
template <typename Scalar>
Matrix<Scalar> invariant_subspace_projector(const OrderedSchur<Scalar>& schur) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index n = schur.T.rows(), k = schur.selected;
  if (k == 0) return Matrix<Scalar>::Zero(n, n);
  if (k == n) return Matrix<Scalar>::Identity(n, n);
  const ComplexMatrix<Scalar> T11 = schur.T.topLeftCorner(k, k);
  const ComplexMatrix<Scalar> T22 = schur.T.bottomRightCorner(n - k, n - k);
  const ComplexMatrix<Scalar> T12 = schur.T.topRightCorner(k, n - k);
  // T11 Y - Y T22 = -T12 block-diagonalizes T with [[I, Y], [0, I]].
  const ComplexMatrix<Scalar> Y = detail::triangular_sylvester<Complex>(T11, -T22, -T12);
  ComplexMatrix<Scalar> Pi = ComplexMatrix<Scalar>::Zero(n, n);
  Pi.topLeftCorner(k, k).setIdentity();
  Pi.topRightCorner(k, n - k) = -Y;
  return (schur.U * Pi * schur.U.adjoint()).real();
}

}  // namespace aac

#endif  // AACONTROL_LINALG_HPP
