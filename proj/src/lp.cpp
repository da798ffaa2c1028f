#include "trp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace trp {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-12;

// Tableau rows 0..m-1 hold constraints, row m holds reduced costs; the last
// column is the right-hand side (for row m: minus the objective value).
class Tableau {
 public:
  Tableau(Matrix t, std::vector<Eigen::Index> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  [[nodiscard]] Eigen::Index rows() const { return t_.rows() - 1; }
  [[nodiscard]] Eigen::Index cols() const { return t_.cols() - 1; }
  Matrix& data() { return t_; }
  [[nodiscard]] const std::vector<Eigen::Index>& basis() const { return basis_; }

  void set_costs(const Vector& cost) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = cost.transpose();
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(rows()) -= cb * t_.row(i);
    }
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void drop_row(Eigen::Index r) {
    Matrix next(t_.rows() - 1, t_.cols());
    next << t_.topRows(r), t_.bottomRows(t_.rows() - r - 1);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  // Runs Bland's rule over columns [0, allowed). Returns false if unbounded.
  bool optimize(Eigen::Index allowed, int& iterations, int max_iterations) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (t_(rows(), j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(i, cols()) / a;
        if (leave < 0 || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      if (++iterations > max_iterations) {
        std::ostringstream os;
        os << "simplex exceeded " << max_iterations << " pivots; last basis:";
        for (auto b : basis_) os << ' ' << b;
        throw NumericalError(os.str());
      }
      pivot(leave, enter);
    }
  }

 private:
  Matrix t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult simplex_solve(const LinearProgram& lp, int max_iterations) {
  const Eigen::Index nv = lp.num_vars();
  const Eigen::Index m_ub = lp.a_ub.rows();
  const Eigen::Index m_eq = lp.a_eq.rows();
  if ((m_ub > 0 && (lp.a_ub.cols() != nv || lp.b_ub.size() != m_ub)) ||
      (m_eq > 0 && (lp.a_eq.cols() != nv || lp.b_eq.size() != m_eq)) ||
      (!lp.free_vars.empty() && static_cast<Eigen::Index>(lp.free_vars.size()) != nv)) {
    throw ValidationError("linear program has inconsistent dimensions");
  }

  // Split each free variable into a nonnegative pair.
  std::vector<Eigen::Index> neg_col(static_cast<std::size_t>(nv), -1);
  Eigen::Index ns = nv;
  for (Eigen::Index k = 0; k < nv; ++k)
    if (!lp.free_vars.empty() && lp.free_vars[static_cast<std::size_t>(k)]) neg_col[static_cast<std::size_t>(k)] = ns++;

  const Eigen::Index m = m_ub + m_eq;
  const Eigen::Index slack0 = ns;
  const Eigen::Index art0 = ns + m_ub;
  const Eigen::Index total = art0 + m;

  Matrix t = Matrix::Zero(m + 1, total + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool is_ub = i < m_ub;
    const auto row = is_ub ? lp.a_ub.row(i) : lp.a_eq.row(i - m_ub);
    for (Eigen::Index k = 0; k < nv; ++k) {
      t(i, k) = row(k);
      if (neg_col[static_cast<std::size_t>(k)] >= 0) t(i, neg_col[static_cast<std::size_t>(k)]) = -row(k);
    }
    if (is_ub) t(i, slack0 + i) = 1.0;
    t(i, total) = is_ub ? lp.b_ub(i) : lp.b_eq(i - m_ub);
    if (t(i, total) < 0.0) t.row(i) *= -1.0;
    if (is_ub && t(i, slack0 + i) > 0.0) {
      basis[static_cast<std::size_t>(i)] = slack0 + i;
    } else {
      t(i, art0 + i) = 1.0;
      basis[static_cast<std::size_t>(i)] = art0 + i;
    }
  }

  Tableau tab(std::move(t), std::move(basis));
  LpResult result;

  Vector phase1 = Vector::Zero(total);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  tab.optimize(total, result.iterations, max_iterations);
  const double scale = 1.0 + (lp.b_ub.size() ? lp.b_ub.cwiseAbs().maxCoeff() : 0.0) +
                       (lp.b_eq.size() ? lp.b_eq.cwiseAbs().maxCoeff() : 0.0);
  if (-tab.data()(tab.rows(), tab.cols()) > tol::kLp * scale) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Drive remaining artificials out of the basis; rows that cannot pivot are redundant.
  for (Eigen::Index i = 0; i < tab.rows();) {
    if (tab.basis()[static_cast<std::size_t>(i)] < art0) {
      ++i;
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < art0; ++j) {
      if (std::abs(tab.data()(i, j)) > kPivotEps) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(i, col);
      ++i;
    } else {
      tab.drop_row(i);
    }
  }

  Vector phase2 = Vector::Zero(total);
  const double sense = lp.maximize ? -1.0 : 1.0;
  for (Eigen::Index k = 0; k < nv; ++k) {
    phase2(k) = sense * lp.objective(k);
    if (neg_col[static_cast<std::size_t>(k)] >= 0) phase2(neg_col[static_cast<std::size_t>(k)]) = -sense * lp.objective(k);
  }
  tab.set_costs(phase2);
  if (!tab.optimize(art0, result.iterations, max_iterations)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  Vector z = Vector::Zero(total);
  for (Eigen::Index i = 0; i < tab.rows(); ++i)
    z(tab.basis()[static_cast<std::size_t>(i)]) = tab.data()(i, tab.cols());
  result.x = Vector(nv);
  for (Eigen::Index k = 0; k < nv; ++k) {
    result.x(k) = z(k);
    if (neg_col[static_cast<std::size_t>(k)] >= 0) result.x(k) -= z(neg_col[static_cast<std::size_t>(k)]);
  }
  result.value = lp.objective.dot(result.x);
  result.status = LpStatus::kOptimal;
  return result;
}

double farkas_violation(std::span<const double> lambda, std::span<const double> mu,
                        const FarkasSolution& s) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j)
      worst = std::max(worst, -(s.xhat(static_cast<Eigen::Index>(i)) +
                                s.d(static_cast<Eigen::Index>(j)) + lambda[i] * mu[j]));
  worst = std::max(worst, s.xhat.sum() + s.d.sum());
  worst = std::max(worst, s.d.size() ? -s.d.minCoeff() : 0.0);
  return worst;
}

std::optional<FarkasSolution> farkas_certificate_lp(std::span<const double> lambda,
                                                    std::span<const double> mu) {
  const auto p = static_cast<Eigen::Index>(lambda.size());
  const auto n = static_cast<Eigen::Index>(mu.size());
  LinearProgram lp;
  lp.objective = Vector::Ones(p + n);
  lp.a_ub = Matrix::Zero(p * n, p + n);
  lp.b_ub = Vector(p * n);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Index r = i * n + j;
      lp.a_ub(r, i) = -1.0;
      lp.a_ub(r, p + j) = -1.0;
      lp.b_ub(r) = lambda[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(j)];
    }
  }
  lp.free_vars.assign(static_cast<std::size_t>(p + n), false);
  std::fill_n(lp.free_vars.begin(), p, true);

  const auto res = simplex_solve(lp);
  if (res.status != LpStatus::kOptimal || res.value > tol::kLp) return std::nullopt;
  FarkasSolution s{res.x.head(p), res.x.tail(n)};
  s.d = s.d.cwiseMax(0.0);
  return s;
}

}  // namespace trp
