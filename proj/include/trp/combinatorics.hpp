#pragma once

#include <optional>
#include <span>
#include <vector>

#include "trp/linalg.hpp"

namespace trp {

namespace tol {
inline constexpr double kDoublyStochastic = 1e-9;
inline constexpr double kStrip = 1e-12;
}  // namespace tol

/// An injection j -> injection[j] from p weights into n costs (0-based),
/// with value = sum_j w[j] * c[injection[j]].
struct AssignmentResult {
  std::vector<int> injection;
  double value = 0.0;
};

/// Minimizes sum_j w[j] c[sigma(j)] over injections sigma. Requires w > 0:
/// the p smallest costs are matched against the weights in reverse order.
AssignmentResult min_partial_assignment(std::span<const double> w, std::span<const double> c);

/// Maximizing counterpart; equals -min_partial_assignment(w, -c).
AssignmentResult max_partial_assignment(std::span<const double> w, std::span<const double> c);

/// Rectangular Hungarian method on the p x n cost matrix w[j] * c[i].
/// Weights of any sign are allowed.
AssignmentResult hungarian_partial_assignment(std::span<const double> w,
                                              std::span<const double> c);

/// Exhaustive search over all n!/(n-p)! injections. Weights of any sign.
AssignmentResult enumerate_partial_assignment(std::span<const double> w,
                                              std::span<const double> c);

/// The minimizing injection if its value is below -threshold.
std::optional<AssignmentResult> vertex_witness_select(std::span<const double> w,
                                                      std::span<const double> c,
                                                      double threshold);

class DoublyStochasticMatrix {
 public:
  /// Validates nonnegativity and unit row/column sums within kDoublyStochastic.
  explicit DoublyStochasticMatrix(Matrix z);

  [[nodiscard]] Eigen::Index dim() const { return z_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return z_; }

 private:
  Matrix z_;
};

/// z = sum_k weights[k] * P_k where P_k(i, permutations[k][i]) = 1.
struct BvnDecomposition {
  std::vector<double> weights;
  std::vector<std::vector<int>> permutations;

  [[nodiscard]] Matrix reconstruct(Eigen::Index n) const;
};

/// Greedy Birkhoff peeling.
BvnDecomposition bvn_decompose(const DoublyStochasticMatrix& z);

/// Value of an injection recomputed from scratch.
double assignment_value(std::span<const double> w, std::span<const double> c,
                        const std::vector<int>& injection);

}  // namespace trp
