#include "trp/solver.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trp/combinatorics.hpp"

namespace trp {

namespace {

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

InnerSolution trace_max_inner(const SpdMatrix& g, const SymMatrix& c) {
  const Eigen::Index p = g.dim();
  const Eigen::Index n = c.dim();
  if (p > n) throw ValidationError("trace_max_inner: p exceeds n");
  const auto eg = sym_eigen(g.sym());
  const auto ec = sym_eigen(c);
  const auto match = max_partial_assignment(as_span(eg.values), as_span(ec.values));

  Matrix selected(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    selected.col(j) = ec.vectors.col(match.injection[static_cast<std::size_t>(j)]);
  // Re-orthonormalize to absorb Jacobi rounding before the feasibility check.
  StiefelPoint x = project_stiefel(selected * eg.vectors.transpose());
  return {match.value, std::move(x)};
}

SolveReport dinkelbach_solve(const ProblemInstance& inst, const SolveOptions& options) {
  const Matrix& a = inst.a().matrix();
  const Matrix& b = inst.b().matrix();
  double mu = phi(inst, random_stiefel(inst.n(), inst.p(), options.seed).matrix());

  std::vector<std::pair<double, double>> history;
  for (int k = 0; k < options.max_iterations; ++k) {
    auto inner = trace_max_inner(inst.g(), SymMatrix(b - mu * a));
#ifndef NDEBUG
    {
      const auto eg = sym_eigen(inst.g().sym());
      const auto ec = sym_eigen(SymMatrix(mu * a - b));
      const double via_min = -min_partial_assignment(as_span(eg.values), as_span(ec.values)).value;
      assert(std::abs(via_min - inner.value) <= 1e-9 * (1.0 + std::abs(inner.value)));
    }
#endif
    history.emplace_back(mu, inner.value);
    const double next = phi(inst, inner.maximizer.matrix());
    if (std::abs(inner.value) <= options.tolerance * (1.0 + std::abs(mu))) {
      SolveReport report{next, std::move(inner.maximizer), k + 1, std::abs(inner.value),
                         std::move(history)};
      return report;
    }
    mu = next;
  }
  std::ostringstream os;
  os << "Dinkelbach iteration did not converge in " << options.max_iterations
     << " iterations; history (mu, F):";
  for (const auto& [m, f] : history) os << " (" << m << ", " << f << ")";
  throw NumericalError(os.str());
}

namespace {

double grid_search(const ProblemInstance& inst) {
  constexpr int kSteps = 2000;
  constexpr double kStep = std::numbers::pi / kSteps;
  const Eigen::Index n = inst.n();
  const Eigen::Index p = inst.p();
  double best = -std::numeric_limits<double>::infinity();
  if (n == 2 && p == 1) {
    Matrix x(2, 1);
    for (int k = 0; k < kSteps; ++k) {
      x << std::cos(k * kStep), std::sin(k * kStep);
      best = std::max(best, phi(inst, x));
    }
  } else if (n == 2 && p == 2) {
    // Rotations and reflections; column signs matter when G is not diagonal.
    Matrix x(2, 2);
    for (int k = 0; k < 2 * kSteps; ++k) {
      const double cs = std::cos(k * kStep);
      const double sn = std::sin(k * kStep);
      x << cs, -sn, sn, cs;
      best = std::max(best, phi(inst, x));
      x << cs, sn, sn, -cs;
      best = std::max(best, phi(inst, x));
    }
  } else if (n == 3 && p == 1) {
    const Matrix& a = inst.a().matrix();
    const Matrix& b = inst.b().matrix();
    Eigen::Vector3d x;
    for (int i = 0; i <= kSteps; ++i) {
      const double theta = i * kStep;
      for (int j = 0; j < kSteps; ++j) {
        const double psi = j * kStep;
        x << std::sin(theta) * std::cos(psi), std::sin(theta) * std::sin(psi), std::cos(theta);
        best = std::max(best, x.dot(b * x) / x.dot(a * x));
      }
    }
  }
  return best;
}

}  // namespace

double oracle_search(const ProblemInstance& inst, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = grid_search(inst);
  for (int s = 0; s < samples; ++s) {
    Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(inst.n(), inst.p(), rng));
    const Matrix x = qr.householderQ() * Matrix::Identity(inst.n(), inst.p());
    best = std::max(best, phi(inst, x));
  }
  return best;
}

}  // namespace trp
