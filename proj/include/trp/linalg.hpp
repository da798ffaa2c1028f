#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace trp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Input violates a modelling assumption (shape, symmetry, definiteness).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to converge or produced an inconsistent result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double kSpd = 1e-10;
inline constexpr double kMultiplicity = 1e-7;
inline constexpr double kReconstruction = 1e-10;
inline constexpr double kOrthogonality = 1e-10;
inline constexpr double kJacobiOffDiagonal = 1e-13;
inline constexpr int kJacobiMaxSweeps = 64;
}  // namespace tol

/// Dense symmetric matrix. Construction symmetrizes by averaging with the
/// transpose, so entries(i,j) == entries(j,i) holds bit-exactly afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(Eigen::Index dim);
  static SymMatrix diagonal(const Vector& d);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  [[nodiscard]] double trace() const { return m_.trace(); }

 private:
  Matrix m_;
};

/// Symmetric positive definite matrix together with its Cholesky factor.
class SpdMatrix {
 public:
  /// Throws ValidationError naming `what` if a Cholesky pivot falls below
  /// kSpd * max(1, trace/dim).
  explicit SpdMatrix(const SymMatrix& base, std::string_view what = "matrix");

  [[nodiscard]] Eigen::Index dim() const { return base_.dim(); }
  [[nodiscard]] const SymMatrix& sym() const { return base_; }
  [[nodiscard]] const Matrix& matrix() const { return base_.matrix(); }
  /// Lower-triangular L with matrix() == L * L^T.
  [[nodiscard]] const Matrix& chol() const { return chol_; }

 private:
  SymMatrix base_;
  Matrix chol_;
};

/// Eigenvalues sorted descending (stable on ties); column k of `vectors`
/// pairs with values[k].
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Cyclic Jacobi eigensolver.
EigenDecomposition sym_eigen(const SymMatrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// Column-stacking vectorization.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);

double min_eigenvalue(const SymMatrix& m);
double max_eigenvalue(const SymMatrix& m);

/// Top of the symmetric-definite pencil (A, B), i.e. of A^{-1} B.
struct PencilTop {
  double value = 0.0;
  int multiplicity = 0;
  /// Euclidean-orthonormal basis of {v : B v = value * A v}.
  Matrix basis;
  /// All pencil eigenvalues, descending.
  Vector spectrum;
};

PencilTop pencil_lambda_max(const SpdMatrix& a, const SymMatrix& b);

/// Max-abs entry of m - I.
double orthonormality_defect(const Matrix& m);

}  // namespace trp
