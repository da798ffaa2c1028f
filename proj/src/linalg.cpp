#include "trp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace trp {

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    std::ostringstream os;
    os << "symmetric matrix must be square and nonempty, got " << m.rows() << "x" << m.cols();
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index dim) { return SymMatrix(Matrix::Identity(dim, dim)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

SpdMatrix::SpdMatrix(const SymMatrix& base, std::string_view what) : base_(base) {
  const Eigen::Index n = base_.dim();
  const Matrix& a = base_.matrix();
  const double floor = tol::kSpd * std::max(1.0, std::abs(a.trace()) / static_cast<double>(n));
  chol_ = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - chol_.row(j).head(j).squaredNorm();
    if (!(d > floor * floor) || !std::isfinite(d)) {
      std::ostringstream os;
      os << what << " is not positive definite (Cholesky pivot " << j << " = "
         << (d > 0 ? std::sqrt(d) : d) << "); the model assumes a positive definite " << what;
      throw ValidationError(os.str());
    }
    const double ljj = std::sqrt(d);
    chol_(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      chol_(i, j) = (a(i, j) - chol_.row(i).head(j).dot(chol_.row(j).head(j))) / ljj;
    }
  }
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  const Eigen::Index n = m.dim();
  Matrix a = m.matrix();
  Matrix v = Matrix::Identity(n, n);
  const double scale = a.norm();
  const double target = tol::kJacobiOffDiagonal * scale;

  int sweep = 0;
  double off = off_diagonal_norm(a);
  while (off > target) {
    if (sweep == tol::kJacobiMaxSweeps) {
      std::ostringstream os;
      os << "Jacobi eigensolver did not converge after " << sweep
         << " sweeps (off-diagonal norm " << off << ", target " << target << ")";
      throw NumericalError(os.str());
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p,q), Golub & Van Loan sym.schur2.
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw ValidationError("unvec: length does not match rows*cols");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double min_eigenvalue(const SymMatrix& m) {
  const auto e = sym_eigen(m);
  return e.values(e.values.size() - 1);
}

double max_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values(0); }

PencilTop pencil_lambda_max(const SpdMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "pencil dimension mismatch: A is " << a.dim() << "x" << a.dim() << ", B is " << b.dim()
       << "x" << b.dim();
    throw ValidationError(os.str());
  }
  const Eigen::Index n = a.dim();
  const auto lower = a.chol().triangularView<Eigen::Lower>();
  // C = L^{-1} B L^{-T}
  Matrix c = lower.solve(b.matrix());
  c = lower.solve(c.transpose()).transpose();
  const auto eig = sym_eigen(SymMatrix(c));

  PencilTop top;
  top.value = eig.values(0);
  top.spectrum = eig.values;
  const double band = tol::kMultiplicity * (1.0 + std::abs(top.value));
  int m = 0;
  while (m < n && top.value - eig.values(m) <= band) ++m;
  top.multiplicity = m;

  // Pencil eigenvectors are v = L^{-T} y.
  const Matrix y = eig.vectors.leftCols(m);
  const Matrix v = a.chol().transpose().triangularView<Eigen::Upper>().solve(y);
  Eigen::HouseholderQR<Matrix> qr(v);
  top.basis = qr.householderQ() * Matrix::Identity(n, m);
  return top;
}

double orthonormality_defect(const Matrix& m) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

}  // namespace trp
