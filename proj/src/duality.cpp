#include "trp/duality.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace trp {

double gtrp_dual_value(const ProblemInstance& inst) {
  return pencil_lambda_max(inst.a(), inst.b()).value;
}

double gr_dual_value(const ProblemInstance& inst) {
  // W = M = 0 is optimal for the redundant-constraint dual; what remains is
  // the generalized Rayleigh supremum over vec(X).
  return pencil_lambda_max(inst.a(), inst.b()).value;
}

namespace {

SymMatrix grs_slack(const ProblemInstance& inst, double mu) {
  return SymMatrix(mu * inst.a().matrix() - inst.b().matrix());
}

}  // namespace

GrsDual grs_dual_value(const ProblemInstance& inst, std::uint64_t seed) {
  const SymMatrix& h = inst.g().sym();
  const Vector lambda = sym_eigen(h).values;
  // The vertex minimum is nondecreasing in mu; bisect on its exact sign so the
  // decide tolerance does not bias the bracket, then certify the upper end.
  auto vertex_min = [&](double mu) {
    const Vector m = sym_eigen(grs_slack(inst, mu)).values;
    return signed_vertex_min(std::span<const double>(lambda.data(), static_cast<std::size_t>(lambda.size())),
                             std::span<const double>(m.data(), static_cast<std::size_t>(m.size())))
        .value;
  };
  double lo = phi(inst, random_stiefel(inst.n(), inst.p(), seed).matrix()) - 1.0;
  double hi = gtrp_dual_value(inst) + 1.0;

  if (vertex_min(lo) >= 0.0) {
    auto at_lo = decide(h, grs_slack(inst, lo));
    if (at_lo.is_certificate()) return {lo, at_lo.certificate(), lo};
  }
  if (vertex_min(hi) < 0.0) {
    std::ostringstream os;
    os << "GRS bisection: upper bracket " << hi << " admits a witness (vertex minimum "
       << vertex_min(hi) << ")";
    throw NumericalError(os.str());
  }
  while (hi - lo > tol::kBisection) {
    const double mid = 0.5 * (lo + hi);
    (vertex_min(mid) >= 0.0 ? hi : lo) = mid;
  }
  auto at_hi = decide(h, grs_slack(inst, hi));
  if (!at_hi.is_certificate()) {
    std::ostringstream os;
    os << "GRS bisection: no certificate at mu = " << hi << " (vertex minimum " << at_hi.vertex_min << ")";
    throw NumericalError(os.str());
  }
  return {hi, at_hi.certificate(), lo};
}

namespace {

// Frobenius projection onto {C + S (x) I_n : S symmetric, tr S >= 0}.
// S (x) I_n has block (i, j) = S_ij I_n, so the unconstrained minimizer is
// the block-trace average; the trace constraint then shifts along I_p.
SymMatrix project_affine(const Matrix& z, const Matrix& c, Eigen::Index p, Eigen::Index n) {
  const Matrix d = z - c;
  Matrix s(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) s(i, j) = d.block(i * n, j * n, n, n).trace() / static_cast<double>(n);
  SymMatrix sym(s);
  const double tr = sym.trace();
  if (tr < 0.0) sym = SymMatrix(sym.matrix() - (tr / static_cast<double>(p)) * Matrix::Identity(p, p));
  return sym;
}

Matrix project_nsd(const Matrix& z) {
  const auto e = sym_eigen(SymMatrix(z));
  const Vector clipped = e.values.cwiseMin(0.0);
  return e.vectors * clipped.asDiagonal() * e.vectors.transpose();
}

}  // namespace

GsFeasibility gs_feasible(const ProblemInstance& inst, double rho) {
  const Eigen::Index p = inst.p();
  const Eigen::Index n = inst.n();
  const Matrix c = kron(inst.g().matrix(), inst.b().matrix() - rho * inst.a().matrix());
  const Matrix id_n = Matrix::Identity(n, n);
  auto residual_at = [&](const SymMatrix& s) {
    return std::max(0.0, max_eigenvalue(SymMatrix(c + kron(s.matrix(), id_n))));
  };

  GsFeasibility out;
  out.s = SymMatrix(Matrix::Zero(p, p));
  out.residual = residual_at(out.s);
  if (out.residual <= tol::kProjectionResidual) {
    out.feasible = true;
    return out;
  }

  constexpr int kCheckEvery = 10;
  constexpr int kStallWindow = 100;
  constexpr int kStallMinIterations = 1000;
  Matrix x = c;
  Matrix inc_cone = Matrix::Zero(c.rows(), c.cols());
  Matrix inc_affine = Matrix::Zero(c.rows(), c.cols());
  double window_start = out.residual;
  for (int it = 1; it <= tol::kProjectionMaxIterations; ++it) {
    const Matrix y = project_nsd(x + inc_cone);
    inc_cone = x + inc_cone - y;
    const SymMatrix s = project_affine(y + inc_affine, c, p, n);
    const Matrix x_next = c + kron(s.matrix(), id_n);
    inc_affine = y + inc_affine - x_next;
    x = x_next;
    out.iterations = it;

    if (it % kCheckEvery != 0) continue;
    const double res = residual_at(s);
    if (res < out.residual) {
      out.residual = res;
      out.s = s;
    }
    if (res <= tol::kProjectionResidual) {
      out.feasible = true;
      return out;
    }
    if (it % kStallWindow == 0) {
      // The residual of an infeasible pair levels off at a positive distance.
      if (it >= kStallMinIterations && window_start - out.residual < 1e-3 * out.residual) break;
      window_start = out.residual;
    }
  }
  return out;
}

GsDualCertificate verify_gs_certificate(const ProblemInstance& inst, double rho,
                                        const SymMatrix& s) {
  const Eigen::Index n = inst.n();
  const Matrix slack = rho * kron(inst.g().matrix(), inst.a().matrix()) -
                       kron(inst.g().matrix(), inst.b().matrix()) -
                       kron(s.matrix(), Matrix::Identity(n, n));
  GsDualCertificate out;
  out.rho = rho;
  out.s = s;
  out.min_eig = min_eigenvalue(SymMatrix(slack));
  out.trace_s = s.trace();
  return out;
}

GsDualCertificate gs_dual_value(const ProblemInstance& inst, std::uint64_t seed) {
  double lo = phi(inst, random_stiefel(inst.n(), inst.p(), seed).matrix()) - 1.0;
  double hi = gtrp_dual_value(inst) + 1.0;

  auto at_lo = gs_feasible(inst, lo);
  if (at_lo.feasible) {
    auto cert = verify_gs_certificate(inst, lo, at_lo.s);
    cert.lower = lo;
    return cert;
  }
  auto at_hi = gs_feasible(inst, hi);
  if (!at_hi.feasible) {
    std::ostringstream os;
    os << "GS bisection: no feasible S found at the upper bracket " << hi << " (residual "
       << at_hi.residual << ")";
    throw NumericalError(os.str());
  }
  SymMatrix best = at_hi.s;
  while (hi - lo > tol::kBisection) {
    const double mid = 0.5 * (lo + hi);
    auto f = gs_feasible(inst, mid);
    if (f.feasible) {
      hi = mid;
      best = f.s;
    } else {
      lo = mid;
    }
  }
  auto cert = verify_gs_certificate(inst, hi, best);
  cert.lower = lo;
  return cert;
}

GapCondition gap_condition(const ProblemInstance& inst) {
  const auto top = pencil_lambda_max(inst.a(), inst.b());
  const Eigen::Index p = inst.p();
  GapCondition out;
  out.multiplicity = top.multiplicity;
  out.holds = top.multiplicity >= p;
  const double scale = 1.0 + std::abs(top.value);
  for (Eigen::Index k = top.multiplicity; k < top.spectrum.size(); ++k) {
    if (top.value - top.spectrum(k) <= 100.0 * tol::kMultiplicity * scale) out.boundary = true;
  }
  if (out.holds) {
    StiefelPoint x = project_stiefel(top.basis.leftCols(p));
    const double attained = phi(inst, x.matrix());
    if (!(std::abs(attained - top.value) <= 1e-8 * scale)) {
      std::ostringstream os;
      os << "gap witness attains " << attained << " instead of lambda_max " << top.value;
      throw NumericalError(os.str());
    }
    out.witness = std::move(x);
  }
  return out;
}

DualityReport full_report(const ProblemInstance& inst, const ReportOptions& options) {
  auto primal = dinkelbach_solve(inst, options.solve);
  const double v = primal.value;
  const auto grs = grs_dual_value(inst, options.solve.seed);
  const auto gap = gap_condition(inst);

  GsDualCertificate gs_cert;
  double dual_gs = std::numeric_limits<double>::quiet_NaN();
  if (options.compute_gs) {
    gs_cert = gs_dual_value(inst, options.solve.seed);
    dual_gs = gs_cert.rho;
  }
  const double dual_gtrp = gtrp_dual_value(inst);
  DualityReport r{.primal = std::move(primal),
                  .dual_gtrp = dual_gtrp,
                  .dual_gr = gr_dual_value(inst),
                  .dual_gs = dual_gs,
                  .dual_grs = grs.value,
                  .gap_gtrp = std::abs(v - dual_gtrp),
                  .gap_gs = std::abs(dual_gs - v),
                  .top_multiplicity = gap.multiplicity,
                  .gap_condition_holds = gap.holds,
                  .gap_condition_boundary = gap.boundary,
                  .certificate = grs.certificate,
                  .gs_certificate = std::move(gs_cert)};

  std::ostringstream problems;
  if (r.dual_gtrp != r.dual_gr) problems << " gtrp and gr duals differ;";
  if (v > r.dual_gtrp + 1e-8) problems << " primal exceeds the gtrp dual;";
  if (v > r.dual_grs + 1e-8) problems << " primal exceeds the grs dual;";
  if (options.compute_gs && v > r.dual_gs + 1e-8) problems << " primal exceeds the gs dual;";
  if (std::abs(v - r.dual_grs) > tol::kGapZero) problems << " grs dual does not match the primal;";
  if (!gap.boundary && (r.gap_gtrp <= tol::kGapZero) != gap.holds)
    problems << " gap value disagrees with the eigenspace multiplicity test;";
  if (!problems.str().empty()) {
    std::ostringstream os;
    os << "inconsistent duality report (primal " << v << ", gtrp " << r.dual_gtrp << ", grs "
       << r.dual_grs << ", multiplicity " << gap.multiplicity << "):" << problems.str();
    throw NumericalError(os.str());
  }
  return r;
}

}  // namespace trp
