#include "trp/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace trp {

namespace {

void check_shapes(std::span<const double> w, std::span<const double> c) {
  if (w.empty()) throw ValidationError("assignment: need at least one weight");
  if (w.size() > c.size()) {
    std::ostringstream os;
    os << "assignment: p = " << w.size() << " weights exceed n = " << c.size() << " costs";
    throw ValidationError(os.str());
  }
}

void check_positive(std::span<const double> w) {
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!(w[j] > 0.0)) {
      std::ostringstream os;
      os << "assignment: weight " << j << " = " << w[j] << " is not positive";
      throw ValidationError(os.str());
    }
  }
}

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

double assignment_value(std::span<const double> w, std::span<const double> c,
                        const std::vector<int>& injection) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * c[static_cast<std::size_t>(injection[j])];
  return s;
}

AssignmentResult min_partial_assignment(std::span<const double> w, std::span<const double> c) {
  check_shapes(w, c);
  check_positive(w);
  auto by_cost = iota_indices(c.size());
  std::stable_sort(by_cost.begin(), by_cost.end(),
                   [&](std::size_t a, std::size_t b) { return c[a] < c[b]; });
  auto by_weight = iota_indices(w.size());
  std::stable_sort(by_weight.begin(), by_weight.end(),
                   [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });

  AssignmentResult out;
  out.injection.assign(w.size(), -1);
  for (std::size_t k = 0; k < w.size(); ++k)
    out.injection[by_weight[k]] = static_cast<int>(by_cost[k]);
  out.value = assignment_value(w, c, out.injection);
  return out;
}

AssignmentResult max_partial_assignment(std::span<const double> w, std::span<const double> c) {
  check_shapes(w, c);
  std::vector<double> neg(c.begin(), c.end());
  for (auto& x : neg) x = -x;
  auto out = min_partial_assignment(w, neg);
  out.value = assignment_value(w, c, out.injection);
  return out;
}

AssignmentResult hungarian_partial_assignment(std::span<const double> w,
                                              std::span<const double> c) {
  check_shapes(w, c);
  // Potentials formulation for a rows x cols problem with rows <= cols,
  // 1-based with a virtual column 0.
  const std::size_t rows = w.size();
  const std::size_t cols = c.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = w[i0 - 1] * c[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentResult out;
  out.injection.assign(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j)
    if (match[j] != 0) out.injection[match[j] - 1] = static_cast<int>(j - 1);
  out.value = assignment_value(w, c, out.injection);
  return out;
}

namespace {

void enumerate_rec(std::span<const double> w, std::span<const double> c, std::size_t j,
                   double partial, std::vector<int>& current, std::vector<char>& used,
                   AssignmentResult& best) {
  if (j == w.size()) {
    if (partial < best.value) {
      best.value = partial;
      best.injection = current;
    }
    return;
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    current[j] = static_cast<int>(i);
    enumerate_rec(w, c, j + 1, partial + w[j] * c[i], current, used, best);
    used[i] = 0;
  }
}

}  // namespace

AssignmentResult enumerate_partial_assignment(std::span<const double> w,
                                              std::span<const double> c) {
  check_shapes(w, c);
  AssignmentResult best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> current(w.size(), -1);
  std::vector<char> used(c.size(), 0);
  enumerate_rec(w, c, 0, 0.0, current, used, best);
  best.value = assignment_value(w, c, best.injection);
  return best;
}

std::optional<AssignmentResult> vertex_witness_select(std::span<const double> w,
                                                      std::span<const double> c,
                                                      double threshold) {
  auto best = min_partial_assignment(w, c);
  if (best.value < -threshold) return best;
  return std::nullopt;
}

DoublyStochasticMatrix::DoublyStochasticMatrix(Matrix z) : z_(std::move(z)) {
  if (z_.rows() != z_.cols() || z_.rows() < 1)
    throw ValidationError("doubly stochastic matrix must be square and nonempty");
  if (z_.minCoeff() < 0.0) throw ValidationError("doubly stochastic matrix has a negative entry");
  const double row_err = (z_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_err = (z_.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (!(std::max(row_err, col_err) <= tol::kDoublyStochastic)) {
    std::ostringstream os;
    os << "row/column sums deviate from 1 by " << std::max(row_err, col_err);
    throw ValidationError(os.str());
  }
}

Matrix BvnDecomposition::reconstruct(Eigen::Index n) const {
  Matrix z = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < weights.size(); ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      z(i, permutations[k][static_cast<std::size_t>(i)]) += weights[k];
  return z;
}

namespace {

// Kuhn's augmenting paths on the bipartite graph {(i, j) : support(i, j)}.
bool augment(const Matrix& z, int row, std::vector<char>& seen, std::vector<int>& col_owner) {
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    if (z(row, j) <= 0.0 || seen[static_cast<std::size_t>(j)]) continue;
    seen[static_cast<std::size_t>(j)] = 1;
    int& owner = col_owner[static_cast<std::size_t>(j)];
    if (owner < 0 || augment(z, owner, seen, col_owner)) {
      owner = row;
      return true;
    }
  }
  return false;
}

std::optional<std::vector<int>> perfect_matching(const Matrix& z) {
  const auto n = static_cast<std::size_t>(z.rows());
  std::vector<int> col_owner(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<char> seen(n, 0);
    if (!augment(z, static_cast<int>(i), seen, col_owner)) return std::nullopt;
  }
  std::vector<int> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[static_cast<std::size_t>(col_owner[j])] = static_cast<int>(j);
  return perm;
}

}  // namespace

BvnDecomposition bvn_decompose(const DoublyStochasticMatrix& ds) {
  const Eigen::Index n = ds.dim();
  Matrix z = ds.matrix();
  z = (z.array() <= tol::kStrip).select(0.0, z);

  BvnDecomposition out;
  while (z.maxCoeff() > 0.0) {
    const auto perm = perfect_matching(z);
    if (!perm) {
      const double leftover = z.sum();
      if (leftover <= static_cast<double>(n) * tol::kDoublyStochastic) break;
      std::ostringstream os;
      os << "Birkhoff decomposition: no perfect matching on the positive support with mass "
         << leftover << " remaining";
      throw NumericalError(os.str());
    }
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) a = std::min(a, z(i, (*perm)[static_cast<std::size_t>(i)]));
    for (Eigen::Index i = 0; i < n; ++i) {
      double& e = z(i, (*perm)[static_cast<std::size_t>(i)]);
      e -= a;
      if (e <= tol::kStrip) e = 0.0;
    }
    out.weights.push_back(a);
    out.permutations.push_back(*perm);
  }
  return out;
}

}  // namespace trp
