#pragma once

#include <optional>
#include <span>
#include <vector>

#include "trp/linalg.hpp"

namespace trp {

namespace tol {
inline constexpr double kLp = 1e-9;
}

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

/// min (or max) objective^T x  s.t.  a_ub x <= b_ub,  a_eq x == b_eq,
/// x_k >= 0 unless free_vars[k].
struct LinearProgram {
  Vector objective;
  bool maximize = false;
  Matrix a_ub;
  Vector b_ub;
  Matrix a_eq;
  Vector b_eq;
  /// Empty means every variable is nonnegative.
  std::vector<bool> free_vars;

  [[nodiscard]] Eigen::Index num_vars() const { return objective.size(); }
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;
  double value = 0.0;
  int iterations = 0;
};

/// Dense two-phase tableau simplex with Bland's rule.
/// Throws NumericalError when `max_iterations` pivots are exceeded.
LpResult simplex_solve(const LinearProgram& lp, int max_iterations = 10000);

/// Multipliers solving
///   xhat_i + d_j + lambda_i mu_j >= 0  for all (i, j),
///   sum(xhat) + sum(d) <= 0,  d >= 0.
struct FarkasSolution {
  Vector xhat;
  Vector d;
};

/// Minimizes sum(xhat) + sum(d) over the cover constraints and accepts the
/// optimum when it is <= kLp. No sign structure on lambda or mu is assumed.
std::optional<FarkasSolution> farkas_certificate_lp(std::span<const double> lambda,
                                                    std::span<const double> mu);

/// Largest violation of the FarkasSolution system (0 when satisfied).
double farkas_violation(std::span<const double> lambda, std::span<const double> mu,
                        const FarkasSolution& s);

}  // namespace trp
