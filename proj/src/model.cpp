#include "trp/model.hpp"

#include <cmath>
#include <sstream>

namespace trp {

ProblemInstance::ProblemInstance(SpdMatrix a, SymMatrix b, SpdMatrix g)
    : a_(std::move(a)), b_(std::move(b)), g_(std::move(g)) {
  if (b_.dim() != a_.dim()) {
    std::ostringstream os;
    os << "B must be " << a_.dim() << "x" << a_.dim() << " to match A, got " << b_.dim() << "x"
       << b_.dim();
    throw ValidationError(os.str());
  }
  if (g_.dim() > a_.dim()) {
    std::ostringstream os;
    os << "p = " << g_.dim() << " exceeds n = " << a_.dim() << "; the Stiefel manifold is empty";
    throw ValidationError(os.str());
  }
}

StiefelPoint::StiefelPoint(Matrix x) : x_(std::move(x)) {
  if (x_.cols() < 1 || x_.cols() > x_.rows())
    throw ValidationError("Stiefel point must be n x p with 1 <= p <= n");
  const double defect = orthonormality_defect(x_.transpose() * x_);
  if (!(defect <= tol::kFeasibility)) {
    std::ostringstream os;
    os << "columns are not orthonormal: ||X^T X - I||_inf = " << defect;
    throw ValidationError(os.str());
  }
  const double top = max_eigenvalue(SymMatrix(x_ * x_.transpose()));
  if (!(top <= 1.0 + tol::kFeasibility)) {
    std::ostringstream os;
    os << "lambda_max(X X^T) = " << top << " exceeds 1";
    throw ValidationError(os.str());
  }
}

double phi(const ProblemInstance& inst, const Matrix& x) {
  if (x.rows() != inst.n() || x.cols() != inst.p())
    throw ValidationError("phi: X has the wrong shape");
  if (!(x.norm() > 0.0)) throw ValidationError("phi: objective is undefined at X = 0");
  const Matrix& g = inst.g().matrix();
  const double num = (g * x.transpose() * inst.b().matrix() * x).trace();
  const double den = (g * x.transpose() * inst.a().matrix() * x).trace();
  return num / den;
}

ProblemInstance ngtrp_to_gtrp(const NgtrpInstance& ng) {
  const auto& base = ng.base;
  const Eigen::Index n = base.n();
  const double scale = base.g().sym().trace();
  const Matrix id = Matrix::Identity(n, n);
  const SymMatrix a_tilde(base.a().matrix() + (ng.alpha / scale) * id);
  const SymMatrix b_tilde(base.b().matrix() + (ng.beta / scale) * id);
  return ProblemInstance(SpdMatrix(a_tilde, "homogenized A (A + alpha/tr(G) I)"), b_tilde,
                         base.g());
}

StiefelPoint project_stiefel(const Matrix& x) {
  if (x.cols() < 1 || x.cols() > x.rows())
    throw ValidationError("project_stiefel: need an n x p matrix with 1 <= p <= n");
  const auto e = sym_eigen(SymMatrix(x.transpose() * x));
  const double smallest = e.values(e.values.size() - 1);
  if (!(smallest > 1e-24 * std::max(1.0, e.values(0))) || !std::isfinite(e.values(0)))
    throw ValidationError("project_stiefel: input is rank deficient");
  const Vector inv_sqrt = e.values.cwiseSqrt().cwiseInverse();
  const Matrix root_inv = e.vectors * inv_sqrt.asDiagonal() * e.vectors.transpose();
  return StiefelPoint(x * root_inv);
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

SymMatrix random_symmetric(Eigen::Index n, std::mt19937_64& rng) {
  return SymMatrix(gaussian_matrix(n, n, rng));
}

SpdMatrix random_spd(Eigen::Index n, std::mt19937_64& rng) {
  const Matrix r = gaussian_matrix(n, n, rng);
  return SpdMatrix(SymMatrix(r * r.transpose() + 0.1 * Matrix::Identity(n, n)));
}

ProblemInstance random_instance(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng) {
  auto a = random_spd(n, rng);
  auto b = random_symmetric(n, rng);
  auto g = random_spd(p, rng);
  return ProblemInstance(std::move(a), std::move(b), std::move(g));
}

ProblemInstance random_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_instance(n, p, rng);
}

StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(n, p, rng));
  return StiefelPoint(qr.householderQ() * Matrix::Identity(n, p));
}

StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_stiefel(n, p, rng);
}

}  // namespace trp
