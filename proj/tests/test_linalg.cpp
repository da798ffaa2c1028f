#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "trp/linalg.hpp"

using namespace trp;
using namespace trp::testing;

TEST_SUITE("linalg") {

TEST_CASE("SymMatrix symmetrizes by averaging") {
  Matrix m(2, 2);
  m << 1, 2, 4, 5;
  SymMatrix s(m);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), ValidationError);
}

TEST_CASE("SpdMatrix rejects indefinite input and names it") {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  try {
    SpdMatrix bad(SymMatrix(m), "A");
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("A is not positive definite") != std::string::npos);
  }
  std::mt19937_64 rng(3);
  const Matrix a = random_spd_matrix(4, rng);
  SpdMatrix ok{SymMatrix(a)};
  CHECK((ok.chol() * ok.chol().transpose() - a).norm() <= 1e-12 * a.norm());
}

TEST_CASE("sym_eigen on diagonal and swap matrices") {
  Vector d(2);
  d << 3, 1;
  const auto e = sym_eigen(SymMatrix::diagonal(d));
  CHECK(e.values(0) == 3.0);
  CHECK(e.values(1) == 1.0);
  CHECK(orthonormality_defect(e.vectors.cwiseAbs()) == 0.0);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto f = sym_eigen(SymMatrix(swap));
  CHECK(f.values(0) == doctest::Approx(1.0));
  CHECK(f.values(1) == doctest::Approx(-1.0));
}

TEST_CASE("sym_eigen keeps tied eigenvalues in original column order") {
  Vector d(3);
  d << 1, 2, 1;
  const auto e = sym_eigen(SymMatrix::diagonal(d));
  CHECK(e.values(0) == 2.0);
  CHECK(e.vectors(1, 0) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(2, 2)) == doctest::Approx(1.0));
}

TEST_CASE("sym_eigen reconstructs random symmetric matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 9;
    const Matrix m = random_sym(n, rng) * (1.0 + trial % 5);
    const auto e = sym_eigen(SymMatrix(m));
    CHECK(orthonormality_defect(e.vectors.transpose() * e.vectors) <= tol::kOrthogonality);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((back - m).norm() <= tol::kReconstruction * m.norm());
    for (Eigen::Index k = 1; k < n; ++k) CHECK(e.values(k - 1) >= e.values(k));
    CHECK((e.values - reference_eigenvalues(m)).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + m.norm()));
  }
}

TEST_CASE("Rayleigh quotients lie between the extreme eigenvalues") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const Matrix q = random_sym(n, rng);
    const auto e = sym_eigen(SymMatrix(q));
    for (int s = 0; s < 100; ++s) {
      Vector x = random_gaussian(n, 1, rng);
      x.normalize();
      const double r = x.dot(q * x);
      CHECK(r <= e.values(0) + 1e-12);
      CHECK(r >= e.values(n - 1) - 1e-12);
    }
  }
}

TEST_CASE("kron of identity and diagonal") {
  Matrix d(2, 2);
  d << 1, 0, 0, 3;
  const Matrix k = kron(Matrix::Identity(2, 2), d);
  Vector want(4);
  want << 1, 3, 1, 3;
  CHECK(k == Matrix(want.asDiagonal()));
}

TEST_CASE("kron is bilinear and satisfies the mixed product rule") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_gaussian(2, 3, rng), b = random_gaussian(3, 2, rng);
    const Matrix c = random_gaussian(3, 2, rng), d = random_gaussian(2, 4, rng);
    const Matrix lhs = kron(a, c) * kron(b, d);
    const Matrix rhs = kron(a * b, c * d);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());

    const Matrix a2 = random_gaussian(2, 3, rng);
    const Matrix sum = kron(2.0 * a + a2, c);
    CHECK((sum - (2.0 * kron(a, c) + kron(a2, c))).norm() <= 1e-12 * sum.norm());
  }
}

TEST_CASE("kron of inverses is the inverse of kron") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = random_spd_matrix(2, rng), a = random_spd_matrix(2 + trial % 2, rng);
    const Matrix ref = kron(g, a).inverse();
    CHECK((kron(g.inverse(), a.inverse()) - ref).norm() <= 1e-12 * ref.norm());
  }
}

TEST_CASE("vec stacks columns and links traces to Kronecker forms") {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  Vector want(4);
  want << 1, 3, 2, 4;
  CHECK(vec(x) == want);
  CHECK(unvec(vec(x), 2, 2) == x);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 3, p = 1 + trial % 2;
    const Matrix a = random_sym(n, rng), g = random_sym(p, rng);
    const Matrix y = random_gaussian(n, p, rng);
    const double direct = (g * y.transpose() * a * y).trace();
    const double via_vec = vec(y).dot(kron(g, a) * vec(y));
    CHECK(rel_err(via_vec, direct) <= 1e-12 * (1.0 + y.squaredNorm() * (a.norm() + g.norm())));

    const Matrix gn = random_sym(n, rng);
    const double direct2 = (gn * y * y.transpose()).trace();
    const double via_vec2 = vec(y).dot(kron(Matrix::Identity(p, p), gn) * vec(y));
    CHECK(rel_err(via_vec2, direct2) <= 1e-12 * (1.0 + y.squaredNorm() * gn.norm()));
  }
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(SymMatrix::identity(3)) == doctest::Approx(1.0));
  Vector d(2);
  d << 1, -1;
  CHECK(min_eigenvalue(SymMatrix::diagonal(d)) == doctest::Approx(-1.0));
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = random_gaussian(5, 3, rng);
    CHECK(min_eigenvalue(SymMatrix(x.transpose() * x)) >= -1e-10);
    CHECK(min_eigenvalue(SymMatrix(x * x.transpose())) >= -1e-10);
  }
}

TEST_CASE("pencil_lambda_max on worked cases") {
  Vector d(2);
  d << 1, 3;
  const auto top = pencil_lambda_max(SpdMatrix(SymMatrix::identity(2)), SymMatrix::diagonal(d));
  CHECK(top.value == doctest::Approx(3.0));
  CHECK(top.multiplicity == 1);
  CHECK(std::abs(top.basis(1, 0)) == doctest::Approx(1.0));

  std::mt19937_64 rng(31);
  const Matrix a = random_spd_matrix(4, rng);
  const auto same = pencil_lambda_max(SpdMatrix(SymMatrix(a)), SymMatrix(a));
  CHECK(same.value == doctest::Approx(1.0));
  CHECK(same.multiplicity == 4);

  CHECK_THROWS_AS(pencil_lambda_max(SpdMatrix(SymMatrix::identity(3)), SymMatrix::identity(2)),
                  ValidationError);
}

TEST_CASE("pencil_lambda_max matches the similarity transform S A") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const Matrix a = random_spd_matrix(n, rng);
    const Matrix s = random_sym(n, rng);
    // A^{-1} (A S A) = S A, whose eigenvalues are real.
    const auto top = pencil_lambda_max(SpdMatrix(SymMatrix(a)), SymMatrix(a * s * a));
    Eigen::EigenSolver<Matrix> es(s * a);
    CHECK(rel_err(top.value, es.eigenvalues().real().maxCoeff()) <= 1e-9);
    CHECK(rel_err(top.value, reference_pencil_max(a, a * s * a)) <= 1e-9);
    // Basis vectors satisfy B v = lambda A v.
    const Matrix b = a * s * a;
    for (Eigen::Index k = 0; k < top.basis.cols(); ++k) {
      const Vector v = top.basis.col(k);
      CHECK((b * v - top.value * a * v).norm() <= 1e-8 * (1.0 + b.norm()));
    }
  }
}

TEST_CASE("pencil_lambda_max is the supremum of the generalized Rayleigh quotient") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const Matrix a = random_spd_matrix(n, rng);
    const Matrix b = random_sym(n, rng);
    const double top = pencil_lambda_max(SpdMatrix(SymMatrix(a)), SymMatrix(b)).value;
    const auto est = ratio_sup_estimate(
        [&](const Vector& x) { return x.dot(b * x) / x.dot(a * x); }, n, 10000, 5000, rng);
    CHECK(est.best_sample <= top + 1e-9);
    CHECK(est.refined <= top + 1e-9);
    CHECK(top - est.refined <= 1e-6);
  }
}

}  // TEST_SUITE
