#pragma once

#include <cstdint>
#include <optional>

#include "trp/model.hpp"
#include "trp/slemma.hpp"
#include "trp/solver.hpp"

namespace trp {

namespace tol {
inline constexpr double kBisection = 1e-8;
inline constexpr double kProjectionResidual = 1e-7;
inline constexpr int kProjectionMaxIterations = 5000;
inline constexpr double kGapZero = 1e-6;
}  // namespace tol

/// Dual of the plain problem: lambda_max(A^{-1} B).
double gtrp_dual_value(const ProblemInstance& inst);

/// Dual after appending X X^T <= I_n. Same value as gtrp_dual_value; kept
/// as its own entry point because it is a different program.
double gr_dual_value(const ProblemInstance& inst);

struct GrsDual {
  double value = 0.0;
  /// Certificate for H = G, Q = value * A - B.
  SLemmaCertificate certificate;
  /// Largest mu at which a witness was found (bisection lower end).
  double lower = 0.0;
};

/// inf { mu : G (x) (mu A - B) + M (x) I + I (x) W >= 0, tr M + tr W <= 0, W >= 0 },
/// by bisection on mu with the S-lemma decision as the feasibility oracle.
GrsDual grs_dual_value(const ProblemInstance& inst, std::uint64_t seed = 0);

/// Scaled dual: inf rho s.t. tr S >= 0, G (x) B + S (x) I_n - rho G (x) A <= 0.
struct GsDualCertificate {
  double rho = 0.0;
  SymMatrix s;
  /// lambda_min of rho G (x) A - G (x) B - S (x) I_n.
  double min_eig = 0.0;
  double trace_s = 0.0;
  /// Largest rho declared infeasible.
  double lower = 0.0;
};

struct GsFeasibility {
  bool feasible = false;
  SymMatrix s;
  /// max(0, lambda_max(G (x) B + S (x) I - rho G (x) A)) at the returned S.
  double residual = 0.0;
  int iterations = 0;
};

/// Dykstra alternating projections between the negative semidefinite cone
/// and {G (x) B + S (x) I - rho G (x) A : S symmetric, tr S >= 0}.
GsFeasibility gs_feasible(const ProblemInstance& inst, double rho);

GsDualCertificate gs_dual_value(const ProblemInstance& inst, std::uint64_t seed = 0);

/// Recomputes min_eig and trace_s of a GS certificate from scratch.
GsDualCertificate verify_gs_certificate(const ProblemInstance& inst, double rho,
                                        const SymMatrix& s);

struct GapCondition {
  int multiplicity = 0;
  bool holds = false;
  /// A feasible X whose columns are top pencil eigenvectors (when holds).
  std::optional<StiefelPoint> witness;
  /// Some eigenvalue lies just outside the multiplicity band.
  bool boundary = false;
};

/// Zero gap for the plain and redundant-constraint duals iff the top
/// eigenspace of A^{-1} B has dimension >= p.
GapCondition gap_condition(const ProblemInstance& inst);

struct DualityReport {
  SolveReport primal;
  double dual_gtrp = 0.0;
  double dual_gr = 0.0;
  double dual_gs = 0.0;
  double dual_grs = 0.0;
  double gap_gtrp = 0.0;
  double gap_gs = 0.0;
  int top_multiplicity = 0;
  bool gap_condition_holds = false;
  bool gap_condition_boundary = false;
  SLemmaCertificate certificate;
  GsDualCertificate gs_certificate;
};

struct ReportOptions {
  SolveOptions solve;
  bool compute_gs = true;
};

/// Runs the primal solve, all four duals and the gap condition, then checks
/// them against each other. Throws NumericalError on inconsistency.
DualityReport full_report(const ProblemInstance& inst, const ReportOptions& options = {});

}  // namespace trp
