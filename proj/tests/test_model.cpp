#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "trp/model.hpp"

using namespace trp;
using namespace trp::testing;

namespace {

ProblemInstance worked_instance() {
  Vector g(2), b(2);
  g << 1, 2;
  b << 1, 3;
  return ProblemInstance(SpdMatrix(SymMatrix::identity(2)), SymMatrix::diagonal(b),
                         SpdMatrix(SymMatrix::diagonal(g)));
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("phi on the worked 2x2 instance") {
  const auto inst = worked_instance();
  CHECK(phi(inst, Matrix::Identity(2, 2)) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(phi(inst, Matrix::Zero(2, 2)), ValidationError);
  CHECK_THROWS_AS(phi(inst, Matrix::Identity(3, 2)), ValidationError);
}

TEST_CASE("phi is constant when B equals A and invariant under scaling") {
  std::mt19937_64 rng(1);
  const auto base = random_instance(4, 2, rng);
  const ProblemInstance same(base.a(), base.a().sym(), base.g());
  const auto x = random_stiefel(4, 2, rng);
  CHECK(phi(same, x.matrix()) == doctest::Approx(1.0).epsilon(1e-14));
  for (double t : {0.5, 2.0, -3.0})
    CHECK(phi(base, t * x.matrix()) == doctest::Approx(phi(base, x.matrix())).epsilon(1e-13));
}

TEST_CASE("instance validation") {
  Vector neg(2);
  neg << 1, -1;
  CHECK_THROWS_AS(SpdMatrix(SymMatrix::diagonal(neg), "A"), ValidationError);
  CHECK_THROWS_AS(ProblemInstance(SpdMatrix(SymMatrix::identity(2)), SymMatrix::identity(3),
                                  SpdMatrix(SymMatrix::identity(1))),
                  ValidationError);
  CHECK_THROWS_AS(ProblemInstance(SpdMatrix(SymMatrix::identity(2)), SymMatrix::identity(2),
                                  SpdMatrix(SymMatrix::identity(3))),
                  ValidationError);
}

TEST_CASE("denominator is positive for every nonzero X") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index n = 1 + k % 5;
    const Eigen::Index p = 1 + (k / 5) % n;
    const auto inst = random_instance(n, p, rng);
    const Matrix x = random_gaussian(n, p, rng);
    CHECK((inst.g().matrix() * x.transpose() * inst.a().matrix() * x).trace() > 0.0);
  }
}

TEST_CASE("ngtrp_to_gtrp") {
  const auto inst = worked_instance();
  SUBCASE("zero shifts are the identity") {
    const auto t = ngtrp_to_gtrp({inst, 0.0, 0.0});
    CHECK(t.a().matrix() == inst.a().matrix());
    CHECK(t.b().matrix() == inst.b().matrix());
  }
  SUBCASE("worked shift: tr G = 3") {
    const auto t = ngtrp_to_gtrp({inst, 3.0, 6.0});
    CHECK((t.a().matrix() - (inst.a().matrix() + Matrix::Identity(2, 2))).norm() == 0.0);
    CHECK((t.b().matrix() - (inst.b().matrix() + 2.0 * Matrix::Identity(2, 2))).norm() == 0.0);
    // tr(G X^T A~ X) = tr(G X^T A X) + alpha at every feasible X.
    CHECK(phi(t, Matrix::Identity(2, 2)) == doctest::Approx((7.0 + 6.0) / (3.0 + 3.0)).epsilon(1e-15));
  }
  SUBCASE("worked shift with p = 1") {
    Vector b(2);
    b << 1, 3;
    const ProblemInstance one(SpdMatrix(SymMatrix::identity(2)), SymMatrix::diagonal(b),
                              SpdMatrix(SymMatrix::identity(1)));
    const auto t = ngtrp_to_gtrp({one, 3.0, 6.0});
    CHECK((t.a().matrix() - 4.0 * Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK(t.b().matrix()(1, 1) == 9.0);
  }
  SUBCASE("shift that destroys definiteness is rejected") {
    CHECK_THROWS_AS(ngtrp_to_gtrp({inst, -6.0, 0.0}), ValidationError);
  }
  SUBCASE("objective is preserved on the feasible set") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = 2 + trial % 3, p = 1 + trial % n;
      const auto base = random_instance(n, p, rng);
      const NgtrpInstance ng{base, u(rng) + 2.5, u(rng)};
      ProblemInstance t = ngtrp_to_gtrp(ng);
      for (int s = 0; s < 100; ++s) {
        const Matrix x = random_orthonormal(n, p, rng);
        const Matrix& g = base.g().matrix();
        const double direct = ((g * x.transpose() * base.b().matrix() * x).trace() + ng.beta) /
                              ((g * x.transpose() * base.a().matrix() * x).trace() + ng.alpha);
        CHECK(rel_err(phi(t, x), direct) <= 1e-12);
      }
    }
  }
}

TEST_CASE("project_stiefel") {
  std::mt19937_64 rng(4);
  const Matrix q = random_orthonormal(4, 2, rng);
  CHECK((project_stiefel(q).matrix() - q).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((project_stiefel(2.0 * q).matrix() - q).cwiseAbs().maxCoeff() <= 1e-12);
  for (int k = 0; k < 50; ++k) {
    const auto x = project_stiefel(random_gaussian(4, 2, rng));
    CHECK(orthonormality_defect(x.matrix().transpose() * x.matrix()) <= tol::kFeasibility);
  }
  Matrix rank1(3, 2);
  rank1 << 1, 2, 1, 2, 1, 2;
  CHECK_THROWS_AS(project_stiefel(rank1), ValidationError);
}

TEST_CASE("random generators are deterministic and valid") {
  const auto a = random_instance(5, 3, std::uint64_t{42});
  const auto b = random_instance(5, 3, std::uint64_t{42});
  CHECK(a.a().matrix() == b.a().matrix());
  CHECK(a.b().matrix() == b.b().matrix());
  CHECK(a.g().matrix() == b.g().matrix());
  CHECK(random_stiefel(5, 3, std::uint64_t{7}).matrix() == random_stiefel(5, 3, std::uint64_t{7}).matrix());

  // X^T X = I implies X X^T <= I.
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 6, p = 1 + (k / 6) % n;
    const auto x = random_stiefel(n, p, rng);
    CHECK(max_eigenvalue(SymMatrix(x.matrix() * x.matrix().transpose())) <= 1.0 + 1e-10);
  }
}

TEST_CASE("StiefelPoint rejects non-orthonormal input") {
  CHECK_THROWS_AS(StiefelPoint(2.0 * Matrix::Identity(3, 2)), ValidationError);
  CHECK_NOTHROW(StiefelPoint{Matrix::Identity(3, 3)});
  Matrix col(3, 1);
  col << 0, 1, 0;
  CHECK_NOTHROW(StiefelPoint{col});
}

}  // TEST_SUITE
