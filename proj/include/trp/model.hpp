#pragma once

#include <cstdint>
#include <random>

#include "trp/linalg.hpp"

namespace trp {

namespace tol {
inline constexpr double kFeasibility = 1e-8;
}

/// The data (A, B, G) of  max tr(G X^T B X) / tr(G X^T A X)  s.t.  X^T X = I_p.
/// Validated once at construction and immutable afterwards.
class ProblemInstance {
 public:
  ProblemInstance(SpdMatrix a, SymMatrix b, SpdMatrix g);

  [[nodiscard]] Eigen::Index n() const { return a_.dim(); }
  [[nodiscard]] Eigen::Index p() const { return g_.dim(); }
  [[nodiscard]] const SpdMatrix& a() const { return a_; }
  [[nodiscard]] const SymMatrix& b() const { return b_; }
  [[nodiscard]] const SpdMatrix& g() const { return g_; }

 private:
  SpdMatrix a_;
  SymMatrix b_;
  SpdMatrix g_;
};

/// (tr(G X^T B X) + beta) / (tr(G X^T A X) + alpha) over the same feasible set.
struct NgtrpInstance {
  ProblemInstance base;
  double alpha = 0.0;
  double beta = 0.0;
};

/// An n x p matrix with orthonormal columns.
class StiefelPoint {
 public:
  /// Throws ValidationError when ||X^T X - I||_inf > kFeasibility or
  /// lambda_max(X X^T) > 1 + kFeasibility.
  explicit StiefelPoint(Matrix x);

  [[nodiscard]] Eigen::Index n() const { return x_.rows(); }
  [[nodiscard]] Eigen::Index p() const { return x_.cols(); }
  [[nodiscard]] const Matrix& matrix() const { return x_; }

 private:
  Matrix x_;
};

/// The trace ratio objective. Defined for every nonzero x, not only
/// feasible ones.
double phi(const ProblemInstance& inst, const Matrix& x);

/// Folds alpha and beta into the diagonal using tr(G X^T X) = tr(G) on the
/// feasible set.
ProblemInstance ngtrp_to_gtrp(const NgtrpInstance& ng);

/// Orthonormal polar factor X (X^T X)^{-1/2}.
StiefelPoint project_stiefel(const Matrix& x);

ProblemInstance random_instance(Eigen::Index n, Eigen::Index p, std::uint64_t seed);
ProblemInstance random_instance(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng);
StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index p, std::uint64_t seed);
StiefelPoint random_stiefel(Eigen::Index n, Eigen::Index p, std::mt19937_64& rng);

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);
SymMatrix random_symmetric(Eigen::Index n, std::mt19937_64& rng);
SpdMatrix random_spd(Eigen::Index n, std::mt19937_64& rng);

}  // namespace trp
