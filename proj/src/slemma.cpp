#include "trp/slemma.hpp"

#include <cmath>
#include <sstream>

#include "trp/lp.hpp"
#include "trp/model.hpp"

namespace trp {

namespace {

constexpr std::size_t kEnumerationLimit = 8;

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

void check_dims(const SymMatrix& h, const SymMatrix& q) {
  if (h.dim() > q.dim()) {
    std::ostringstream os;
    os << "S-lemma needs p <= n, got p = " << h.dim() << ", n = " << q.dim();
    throw ValidationError(os.str());
  }
}

}  // namespace

AssignmentResult signed_vertex_min(std::span<const double> lambda, std::span<const double> mu) {
  if (mu.size() <= kEnumerationLimit) return enumerate_partial_assignment(lambda, mu);
  return hungarian_partial_assignment(lambda, mu);
}

Matrix certificate_matrix(const SymMatrix& h, const SymMatrix& q, const SymMatrix& m,
                          const SymMatrix& w) {
  const Eigen::Index p = h.dim();
  const Eigen::Index n = q.dim();
  return kron(h.matrix(), q.matrix()) + kron(m.matrix(), Matrix::Identity(n, n)) +
         kron(Matrix::Identity(p, p), w.matrix());
}

SLemmaDecision decide(const SymMatrix& h, const SymMatrix& q) {
  check_dims(h, q);
  const Eigen::Index p = h.dim();
  const Eigen::Index n = q.dim();
  const auto eh = sym_eigen(h);
  const auto eq = sym_eigen(q);
  const auto best = signed_vertex_min(as_span(eh.values), as_span(eq.values));

  SLemmaDecision out;
  out.vertex_min = best.value;

  if (best.value < -tol::kDecide) {
    // X = U_q Y U_h^T with Y the 0/1 partial permutation of the best vertex.
    Matrix y = Matrix::Zero(n, p);
    for (Eigen::Index j = 0; j < p; ++j) y(best.injection[static_cast<std::size_t>(j)], j) = 1.0;
    SLemmaWitness wit;
    wit.x = eq.vectors * y * eh.vectors.transpose();
    wit.value = (h.matrix() * wit.x.transpose() * q.matrix() * wit.x).trace();
    out.outcome = std::move(wit);
    return out;
  }

  const auto sol = farkas_certificate_lp(as_span(eh.values), as_span(eq.values));
  if (!sol) {
    std::ostringstream os;
    os << "S-lemma boundary degeneracy: vertex minimum " << best.value
       << " is not below -" << tol::kDecide << " but the multiplier LP is infeasible";
    throw NumericalError(os.str());
  }
  SLemmaCertificate cert{
      SymMatrix(eh.vectors * sol->xhat.asDiagonal() * eh.vectors.transpose()),
      SymMatrix(eq.vectors * sol->d.asDiagonal() * eq.vectors.transpose()), 0.0, 0.0};
  cert.min_eig = min_eigenvalue(SymMatrix(certificate_matrix(h, q, cert.m, cert.w)));
  cert.trace_slack = -(cert.m.trace() + cert.w.trace());
  out.outcome = std::move(cert);
  return out;
}

VerificationReport verify_witness(const SymMatrix& h, const SymMatrix& q, const SLemmaWitness& w) {
  VerificationReport r;
  if (w.x.rows() != q.dim() || w.x.cols() != h.dim()) {
    r.violations.emplace_back("witness shape does not match (n, p)");
    return r;
  }
  r.orthonormality = orthonormality_defect(w.x.transpose() * w.x);
  r.quadratic_value = (h.matrix() * w.x.transpose() * q.matrix() * w.x).trace();
  if (!(r.orthonormality <= tol::kFeasibility))
    r.violations.emplace_back("X^T X != I_p (defect " + std::to_string(r.orthonormality) + ")");
  if (!(r.quadratic_value < -tol::kDecide))
    r.violations.emplace_back("tr(H X^T Q X) is not negative (" +
                              std::to_string(r.quadratic_value) + ")");
  r.passed = r.violations.empty();
  return r;
}

VerificationReport verify_certificate(const SymMatrix& h, const SymMatrix& q,
                                      const SLemmaCertificate& c) {
  VerificationReport r;
  if (c.m.dim() != h.dim() || c.w.dim() != q.dim()) {
    r.violations.emplace_back("multiplier shapes do not match (p, n)");
    return r;
  }
  r.w_min_eig = min_eigenvalue(c.w);
  r.min_eig = min_eigenvalue(SymMatrix(certificate_matrix(h, q, c.m, c.w)));
  r.trace_slack = -(c.m.trace() + c.w.trace());
  if (!(r.w_min_eig >= -tol::kCertificate))
    r.violations.emplace_back("W is not PSD (min eigenvalue " + std::to_string(r.w_min_eig) + ")");
  if (!(r.min_eig >= -tol::kCertificate))
    r.violations.emplace_back("Kronecker sum is not PSD (min eigenvalue " +
                              std::to_string(r.min_eig) + ")");
  if (!(r.trace_slack >= -tol::kCertificate))
    r.violations.emplace_back("tr M + tr W > 0 (slack " + std::to_string(r.trace_slack) + ")");
  r.passed = r.violations.empty();
  return r;
}

double slemma_lhs_min(const SymMatrix& h, const SymMatrix& q) {
  check_dims(h, q);
  const auto eh = sym_eigen(h);
  const auto eq = sym_eigen(q);
  return signed_vertex_min(as_span(eh.values), as_span(eq.values)).value;
}

}  // namespace trp
