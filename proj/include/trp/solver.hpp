#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trp/model.hpp"

namespace trp {

namespace tol {
inline constexpr double kDinkelbach = 1e-10;
}

struct InnerSolution {
  double value = 0.0;
  StiefelPoint maximizer;
};

/// max tr(G X^T C X) over X^T X = I_p: pairs the eigenvalues of G
/// (descending) with the p largest eigenvalues of C (descending).
InnerSolution trace_max_inner(const SpdMatrix& g, const SymMatrix& c);

struct SolveOptions {
  int max_iterations = 200;
  double tolerance = tol::kDinkelbach;
  std::uint64_t seed = 0;
};

struct SolveReport {
  double value = 0.0;
  StiefelPoint maximizer;
  int iterations = 0;
  /// |F(mu)| at the accepted iterate.
  double residual = 0.0;
  /// (mu_k, F(mu_k)) per iteration.
  std::vector<std::pair<double, double>> history;
};

/// Dinkelbach iteration on F(mu) = max_X tr(G X^T (B - mu A) X).
/// Throws NumericalError (with the history) when the iteration cap is hit.
SolveReport dinkelbach_solve(const ProblemInstance& inst, const SolveOptions& options = {});

/// Best objective over `samples` random Stiefel points, plus a fine angle
/// grid when (n, p) is (2, 1), (2, 2) or (3, 1). A lower bound on the
/// optimum.
double oracle_search(const ProblemInstance& inst, int samples, std::uint64_t seed);

}  // namespace trp
