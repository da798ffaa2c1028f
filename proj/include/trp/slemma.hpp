#pragma once

#include <string>
#include <variant>
#include <vector>

#include "trp/combinatorics.hpp"
#include "trp/linalg.hpp"

namespace trp {

namespace tol {
inline constexpr double kDecide = 1e-9;
inline constexpr double kCertificate = 1e-8;
}  // namespace tol

/// Stiefel point X with tr(H X^T Q X) < 0.
struct SLemmaWitness {
  Matrix x;
  /// tr(H X^T Q X) at construction.
  double value = 0.0;
};

/// Multipliers (M, W) with W >= 0, tr M + tr W <= 0 and
/// H (x) Q + M (x) I_n + I_p (x) W >= 0, which certifies
/// tr(H X^T Q X) >= 0 on the whole Stiefel manifold.
struct SLemmaCertificate {
  SymMatrix m;
  SymMatrix w;
  /// lambda_min of the Kronecker sum.
  double min_eig = 0.0;
  /// -(tr M + tr W).
  double trace_slack = 0.0;
};

struct SLemmaDecision {
  std::variant<SLemmaWitness, SLemmaCertificate> outcome;
  /// min over partial permutations of sum_j lambda_j mu_sigma(j).
  double vertex_min = 0.0;

  [[nodiscard]] bool is_certificate() const {
    return std::holds_alternative<SLemmaCertificate>(outcome);
  }
  [[nodiscard]] const SLemmaCertificate& certificate() const {
    return std::get<SLemmaCertificate>(outcome);
  }
  [[nodiscard]] const SLemmaWitness& witness() const { return std::get<SLemmaWitness>(outcome); }
};

/// Decides which alternative of the matrix S-lemma holds for (H, Q) and
/// builds the corresponding object. Throws NumericalError if the vertex
/// minimum is nonnegative within kDecide but the multiplier LP rejects.
SLemmaDecision decide(const SymMatrix& h, const SymMatrix& q);

struct VerificationReport {
  bool passed = false;
  std::vector<std::string> violations;
  double orthonormality = 0.0;
  double quadratic_value = 0.0;
  double min_eig = 0.0;
  double w_min_eig = 0.0;
  double trace_slack = 0.0;
};

/// Recomputes every witness quantity from (H, Q, X).
VerificationReport verify_witness(const SymMatrix& h, const SymMatrix& q, const SLemmaWitness& w);

/// Recomputes every certificate quantity from (H, Q, M, W), including a
/// fresh eigensolve of the np x np Kronecker sum.
VerificationReport verify_certificate(const SymMatrix& h, const SymMatrix& q,
                                      const SLemmaCertificate& c);

/// Global minimum of tr(H X^T Q X) over X^T X = I_p, attained at a
/// partial-permutation vertex in the joint eigenbasis.
double slemma_lhs_min(const SymMatrix& h, const SymMatrix& q);

/// The Kronecker sum H (x) Q + M (x) I_n + I_p (x) W.
Matrix certificate_matrix(const SymMatrix& h, const SymMatrix& q, const SymMatrix& m,
                          const SymMatrix& w);

/// Minimizing partial permutation for weights of arbitrary sign:
/// enumeration for n <= 8, Hungarian beyond.
AssignmentResult signed_vertex_min(std::span<const double> lambda, std::span<const double> mu);

}  // namespace trp
