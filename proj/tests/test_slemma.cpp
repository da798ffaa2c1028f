#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "trp/slemma.hpp"

using namespace trp;
using namespace trp::testing;

namespace {

SymMatrix diag_of(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return SymMatrix::diagonal(d);
}

double quad(const SymMatrix& h, const SymMatrix& q, const Matrix& x) {
  return (h.matrix() * x.transpose() * q.matrix() * x).trace();
}

}  // namespace

TEST_SUITE("slemma") {

TEST_CASE("boundary instance yields the diagonal certificate") {
  const SymMatrix h = diag_of({1, 2});
  const SymMatrix q = diag_of({7.0 / 3.0 - 1.0, 7.0 / 3.0 - 3.0});
  const auto d = decide(h, q);
  REQUIRE(d.is_certificate());
  CHECK(std::abs(d.vertex_min) <= 1e-12);
  const auto rep = verify_certificate(h, q, d.certificate());
  CHECK(rep.passed);
  CHECK(rep.min_eig >= -tol::kCertificate);
  CHECK(rep.trace_slack >= -tol::kCertificate);

  // The hand-built multipliers pass as well; the Kronecker sum is diag(0, 0, 2, 0).
  const SLemmaCertificate hand{diag_of({-4.0 / 3.0, -2.0 / 3.0}), diag_of({0, 2})};
  const Matrix k = certificate_matrix(h, q, hand.m, hand.w);
  Vector want(4);
  want << 0, 0, 2, 0;
  CHECK((k - Matrix(want.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14);
  const auto hrep = verify_certificate(h, q, hand);
  CHECK(hrep.passed);
  CHECK(std::abs(hrep.min_eig) <= 1e-14);
  CHECK(std::abs(hrep.trace_slack) <= 1e-14);
}

TEST_CASE("positive product gives a certificate") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = 2 + k % 3, p = 1 + k % n;
    const SymMatrix q(random_spd_matrix(n, rng));
    const auto d = decide(SymMatrix::identity(p), q);
    REQUIRE(d.is_certificate());
    CHECK(verify_certificate(SymMatrix::identity(p), q, d.certificate()).passed);
    const SLemmaCertificate zero{SymMatrix(Matrix::Zero(p, p)), SymMatrix(Matrix::Zero(n, n))};
    CHECK(verify_certificate(SymMatrix::identity(p), q, zero).passed);
  }
}

TEST_CASE("negative vertex gives a witness") {
  const SymMatrix h = diag_of({1, 2}), q = diag_of({1, -3});
  const auto d = decide(h, q);
  REQUIRE_FALSE(d.is_certificate());
  CHECK(d.vertex_min == doctest::Approx(-5.0));
  CHECK(d.witness().value == doctest::Approx(-5.0));
  const auto rep = verify_witness(h, q, d.witness());
  CHECK(rep.passed);
  CHECK(rep.quadratic_value == doctest::Approx(-5.0));
  CHECK(rep.orthonormality <= 1e-8);
}

TEST_CASE("corrupted certificates are rejected with a named reason") {
  const SymMatrix h = diag_of({1, 2});
  const SymMatrix q = diag_of({7.0 / 3.0 - 1.0, 7.0 / 3.0 - 3.0});
  const SLemmaCertificate bad{diag_of({-4.0 / 3.0, -2.0 / 3.0}), diag_of({-1, 2})};
  const auto rep = verify_certificate(h, q, bad);
  CHECK_FALSE(rep.passed);
  bool named = false;
  for (const auto& v : rep.violations) named = named || v.find("W is not PSD") != std::string::npos;
  CHECK(named);

  const SLemmaCertificate loose{diag_of({0, 0}), diag_of({0, 2})};
  const auto r2 = verify_certificate(h, q, loose);
  CHECK_FALSE(r2.passed);

  const SLemmaWitness fake{Matrix::Identity(2, 2), 0.0};
  CHECK_FALSE(verify_witness(diag_of({1, 2}), diag_of({1, 3}), fake).passed);
}

TEST_CASE("slemma_lhs_min") {
  CHECK(slemma_lhs_min(diag_of({1, 2}), diag_of({1, 3})) == doctest::Approx(5.0));
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Index n = 3, p = 1 + k % 3;
    const Matrix q = random_sym(n, rng);
    const Eigen::VectorXd ev = reference_eigenvalues(q);
    CHECK(slemma_lhs_min(SymMatrix::identity(p), SymMatrix(q)) ==
          doctest::Approx(ev.tail(p).sum()).epsilon(1e-10));
  }
}

TEST_CASE("slemma_lhs_min bounds random Stiefel samples and is attained") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 12; ++k) {
    const Eigen::Index n = 2 + k % 2, p = 1 + k % 2;
    const SymMatrix h(random_sym(p, rng)), q(random_sym(n, rng));
    const double lo = slemma_lhs_min(h, q);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 10000; ++s) {
      const double v = quad(h, q, random_orthonormal(n, p, rng));
      CHECK(v >= lo - 1e-10);
      best = std::min(best, v);
    }
    CHECK(best - lo <= 0.1 * (1.0 + std::abs(lo)));
    const auto d = decide(h, q);
    if (!d.is_certificate()) {
      CHECK(d.witness().value == doctest::Approx(lo).epsilon(1e-9));
      CHECK(quad(h, q, d.witness().x) == doctest::Approx(lo).epsilon(1e-9));
    }
  }
}

TEST_CASE("decide returns a verified object on random inputs") {
  std::mt19937_64 rng(4);
  int certs = 0, wits = 0;
  for (int k = 0; k < 200; ++k) {
    const Eigen::Index n = 1 + k % 5, p = 1 + (k / 5) % n;
    const SymMatrix h(random_spd_matrix(p, rng));
    Matrix qm = random_sym(n, rng);
    qm += (k % 3) * Matrix::Identity(n, n);
    const SymMatrix q(qm);
    const auto d = decide(h, q);
    if (d.is_certificate()) {
      ++certs;
      CHECK(verify_certificate(h, q, d.certificate()).passed);
      CHECK(slemma_lhs_min(h, q) >= -1e-9);
    } else {
      ++wits;
      CHECK(verify_witness(h, q, d.witness()).passed);
    }
  }
  CHECK(certs > 0);
  CHECK(wits > 0);
}

TEST_CASE("negating Q flips the minimum into a maximum") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Index n = 3, p = 2;
    const SymMatrix h(random_spd_matrix(p, rng)), q(random_sym(n, rng));
    const SymMatrix neg(-q.matrix());
    double best = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2000; ++s) best = std::max(best, quad(h, q, random_orthonormal(n, p, rng)));
    CHECK(-slemma_lhs_min(h, neg) >= best - 1e-10);
  }
}

TEST_CASE("signed_vertex_min matches brute force for any weight signs") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 10);
    const std::size_t p = 1 + static_cast<std::size_t>(k / 10) % std::min<std::size_t>(n, 4);
    std::vector<double> l(p), m(n);
    for (auto& x : l) x = u(rng);
    for (auto& x : m) x = u(rng);
    if (n > 8) continue;
    CHECK(signed_vertex_min(l, m).value == doctest::Approx(brute_force_min_injection(l, m)).epsilon(1e-12));
  }
  std::vector<double> l{1.0, -2.0, 0.5}, m(10);
  for (auto& x : m) x = u(rng);
  CHECK(signed_vertex_min(l, m).value ==
        doctest::Approx(enumerate_partial_assignment(l, m).value).epsilon(1e-12));
}

}  // TEST_SUITE
