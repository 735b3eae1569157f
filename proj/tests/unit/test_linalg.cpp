#include <cmath>
#include <stdexcept>

#include <lrr/linalg.hpp>
#include <lrr/rng.hpp>
#include <lrr/types.hpp>

#include "doctest.h"
#include "test_util.hpp"

using lrr::Matrix;
using lrr::RngStream;
using lrr::Vector;
using lrr_test::haar_orthonormal;
using lrr_test::random_matrix;
using lrr_test::random_spd;
using lrr_test::random_symmetric;
using lrr_test::random_unit_vector;

namespace {

void check_svd_invariants(const Matrix& a, const lrr::SvdFactors& f) {
  const lrr::Index k = std::min(a.rows(), a.cols());
  REQUIRE(f.sigmas.size() == k);
  for (lrr::Index j = 0; j + 1 < k; ++j) {
    CHECK(f.sigmas(j) >= f.sigmas(j + 1));
  }
  CHECK(f.sigmas(k - 1) >= 0.0);
  CHECK((f.u.transpose() * f.u - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <=
        1e-10);
  CHECK((f.v.transpose() * f.v - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <=
        1e-10);
  const Matrix rebuilt = f.u * f.sigmas.asDiagonal() * f.v.transpose();
  CHECK((a - rebuilt).norm() <= 1e-8 * std::max(1.0, a.norm()));
  lrr::Index expected_rank = 0;
  if (f.sigmas(0) > 0.0) {
    for (lrr::Index j = 0; j < k; ++j) {
      if (f.sigmas(j) > f.rank_tol * f.sigmas(0)) ++expected_rank;
    }
  }
  CHECK(f.numerical_rank == expected_rank);
  // Sign canonicalization: the largest-magnitude entry of each left singular
  // vector is non-negative.
  for (lrr::Index j = 0; j < k; ++j) {
    lrr::Index arg = 0;
    f.u.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(f.u(arg, j) >= 0.0);
  }
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("svd of a diagonal matrix") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = 1.0;
  const auto f = lrr::svd(a);
  CHECK(f.sigmas(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.sigmas(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.numerical_rank == 2);
  // u and v agree with the identity up to a common column sign.
  for (lrr::Index j = 0; j < 2; ++j) {
    CHECK(std::abs(f.u.col(j).cwiseAbs().maxCoeff() - 1.0) < 1e-12);
    CHECK((f.u.col(j) - f.v.col(j)).norm() < 1e-12);
  }
}

TEST_CASE("svd of the zero matrix") {
  const Matrix a = Matrix::Zero(2, 3);
  const auto f = lrr::svd(a);
  CHECK(f.sigmas.norm() == 0.0);
  CHECK(f.numerical_rank == 0);
}

TEST_CASE("svd singular values of a shear") {
  Matrix a(2, 2);
  a << 1, 1, 0, 1;
  const auto f = lrr::svd(a);
  const double s1 = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
  const double s2 = std::sqrt((3.0 - std::sqrt(5.0)) / 2.0);
  CHECK(f.sigmas(0) == doctest::Approx(s1).epsilon(1e-12));
  CHECK(f.sigmas(1) == doctest::Approx(s2).epsilon(1e-12));
}

TEST_CASE("svd factor invariants on random matrices") {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = random_matrix(rng, 5, 7);
    check_svd_invariants(a, lrr::svd(a));
    const Matrix b = random_matrix(rng, 6, 4);
    check_svd_invariants(b, lrr::svd(b));
  }
  // Rank-deficient input: an outer product has numerical rank 1.
  const Vector u = random_unit_vector(rng, 6);
  const Vector v = random_unit_vector(rng, 6);
  const Matrix low = 2.5 * u * v.transpose();
  const auto f = lrr::svd(low);
  CHECK(f.numerical_rank == 1);
  check_svd_invariants(low, f);
}

TEST_CASE("svd default rank tolerance matches the documented choice") {
  RngStream rng(12, 0);
  const Matrix a = random_matrix(rng, 4, 9);
  const auto f = lrr::svd(a);
  CHECK(f.rank_tol == lrr::default_rank_tol(a));
  CHECK(lrr::default_rank_tol(a) == doctest::Approx(9e-10).epsilon(1e-12));
  CHECK_THROWS_AS(lrr::svd(a, 1.5), std::invalid_argument);
}

TEST_CASE("frobenius inner product") {
  CHECK(lrr::frobenius_inner(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  RngStream rng(13, 0);
  const Matrix a = random_matrix(rng, 3, 4);
  CHECK(lrr::frobenius_inner(a, Matrix::Zero(3, 4)) == 0.0);
  Matrix p(2, 2), q(2, 2);
  p << 1, 2, 3, 4;
  q << 4, 3, 2, 1;
  CHECK(lrr::frobenius_inner(p, q) == doctest::Approx(20.0).epsilon(1e-14));
  // Equals the trace form.
  const Matrix b = random_matrix(rng, 3, 4);
  CHECK(lrr::frobenius_inner(a, b) ==
        doctest::Approx((a.transpose() * b).trace()).epsilon(1e-12));
  CHECK_THROWS_AS(lrr::frobenius_inner(a, Matrix::Zero(4, 3)),
                  std::invalid_argument);
}

TEST_CASE("schatten norms") {
  CHECK(lrr::schatten_norm(Matrix::Identity(3, 3), 1.0) ==
        doctest::Approx(3.0).epsilon(1e-12));
  Matrix shear(2, 2);
  shear << 1, 1, 0, 1;
  CHECK(lrr::schatten_norm(shear, 1.0) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  RngStream rng(14, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = random_matrix(rng, 4, 6);
    CHECK(std::abs(lrr::schatten_norm(a, 2.0) - a.norm()) <= 1e-10);
    CHECK(lrr::schatten_norm(a, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(lrr::operator_norm(a)).epsilon(1e-12));
    CHECK(lrr::nuclear_norm(a) ==
          doctest::Approx(lrr::schatten_norm(a, 1.0)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lrr::schatten_norm(shear, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lrr::schatten_norm(shear, -1.0), std::invalid_argument);
}

TEST_CASE("sgn on diagonal and rank-one matrices") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 5.0;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK((lrr::sgn(d) - expect).norm() < 1e-12);

  const Matrix ci = 3.7 * Matrix::Identity(4, 4);
  CHECK((lrr::sgn(ci) - Matrix::Identity(4, 4)).norm() < 1e-10);

  RngStream rng(15, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector u = random_unit_vector(rng, 5);
    const Vector v = random_unit_vector(rng, 7);
    const Matrix a = 2.0 * u * v.transpose();
    const Matrix s = lrr::sgn(a);
    CHECK((s - u * v.transpose()).norm() < 1e-10);
  }
}

TEST_CASE("sgn is a unit-norm dual witness of the nuclear norm") {
  RngStream rng(16, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = random_matrix(rng, 4, 6);
    const Matrix s = lrr::sgn(a);
    CHECK(lrr::operator_norm(s) <= 1.0 + 1e-10);
    CHECK(lrr::frobenius_inner(s, a) ==
          doctest::Approx(lrr::nuclear_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("sym_eig invariants") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix s = random_symmetric(rng, 6);
    const auto e = lrr::sym_eig(s);
    CHECK((e.q.transpose() * e.q - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <=
          1e-10);
    const Matrix rebuilt = e.q * e.lambdas.asDiagonal() * e.q.transpose();
    CHECK((s - rebuilt).norm() <= 1e-8 * std::max(1.0, s.norm()));
    for (lrr::Index j = 0; j + 1 < e.lambdas.size(); ++j) {
      CHECK(e.lambdas(j) >= e.lambdas(j + 1));
    }
  }
  CHECK_THROWS_AS(lrr::sym_eig(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("sym_expm on diagonal input and zero") {
  CHECK((lrr::sym_expm(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)).norm() <
        1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.5;
  d(1, 1) = -0.5;
  const Matrix e = lrr::sym_expm(d);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.5)).epsilon(1e-13));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
  CHECK(std::abs(e(0, 1)) < 1e-14);
}

TEST_CASE("sym_expm agrees with the Taylor series on small matrices") {
  RngStream rng(18, 0);
  for (int rep = 0; rep < 10; ++rep) {
    Matrix s = random_symmetric(rng, 4);
    s /= std::max(1.0, lrr::operator_norm(s));
    Matrix taylor = Matrix::Identity(4, 4);
    Matrix term = Matrix::Identity(4, 4);
    for (int j = 1; j <= 50; ++j) {
      term = (term * s) / static_cast<double>(j);
      taylor += term;
    }
    CHECK((lrr::sym_expm(s) - taylor).norm() < 1e-12);
  }
}

TEST_CASE("sym_expm rejects asymmetric input and bounds its norm") {
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(lrr::sym_expm(bad), std::invalid_argument);
  RngStream rng(19, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix s = random_symmetric(rng, 5);
    CHECK(lrr::operator_norm(lrr::sym_expm(s)) <=
          std::exp(lrr::operator_norm(s)) * (1.0 + 1e-12));
  }
}

TEST_CASE("sym_logm inverts sym_expm") {
  CHECK(lrr::sym_logm(Matrix::Identity(3, 3)).norm() < 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::exp(1.0);
  d(1, 1) = std::exp(2.0);
  const Matrix l = lrr::sym_logm(d);
  CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-12));

  RngStream rng(20, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix s = random_spd(rng, 5);
    const Matrix round = lrr::sym_expm(lrr::sym_logm(s));
    CHECK((round - s).norm() <= 1e-8 * std::max(1.0, s.norm()));
  }
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(lrr::sym_logm(neg), std::invalid_argument);
}

TEST_CASE("expm handles general square matrices") {
  Matrix nilp(2, 2);
  nilp << 0, 1, 0, 0;
  Matrix expect(2, 2);
  expect << 1, 1, 0, 1;
  CHECK((lrr::expm(nilp) - expect).norm() < 1e-12);
  RngStream rng(21, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix s = random_symmetric(rng, 4);
    CHECK((lrr::expm(s) - lrr::sym_expm(s)).norm() <
          1e-10 * std::max(1.0, lrr::sym_expm(s).norm()));
  }
  CHECK_THROWS_AS(lrr::expm(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("singular value differences obey the triangle comparison") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  auto same = lrr::singular_triangle_gap(a, a);
  CHECK(same.first == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(same.second == doctest::Approx(0.0).epsilon(1e-14));
  auto vs_zero = lrr::singular_triangle_gap(a, Matrix::Zero(2, 2));
  CHECK(vs_zero.first == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(vs_zero.second == doctest::Approx(3.0).epsilon(1e-12));

  RngStream rng(22, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix x = random_matrix(rng, 5, 7);
    const Matrix y = random_matrix(rng, 5, 7);
    const auto [lhs, rhs] = lrr::singular_triangle_gap(x, y);
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("eigenvalue differences of symmetric pairs are nuclear-dominated") {
  RngStream rng(23, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix a = random_symmetric(rng, 6);
    const Matrix b = random_symmetric(rng, 6);
    const Vector la = lrr::sym_eig(a).lambdas;
    const Vector lb = lrr::sym_eig(b).lambdas;
    const double lhs = (la - lb).cwiseAbs().sum();
    CHECK(lhs <= lrr::nuclear_norm(a - b) + 1e-9);
  }
}

TEST_CASE("nuclear norm duality gap") {
  RngStream rng(24, 0);
  auto zero = lrr::nuclear_duality_gap(Matrix::Zero(3, 3), 10, rng);
  CHECK(zero.first == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(zero.second == doctest::Approx(0.0).epsilon(1e-14));

  auto idt = lrr::nuclear_duality_gap(Matrix::Identity(2, 2), 100, rng);
  CHECK(idt.second == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(idt.first <= idt.second + 1e-9);

  Matrix shear(2, 2);
  shear << 1, 1, 0, 1;
  auto sh = lrr::nuclear_duality_gap(shear, 10000, rng);
  CHECK(sh.second == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  CHECK(sh.first <= sh.second + 1e-9);
  CHECK(sh.second ==
        doctest::Approx(lrr::nuclear_norm(shear)).epsilon(1e-9));
}

TEST_CASE("trace is cyclic") {
  RngStream rng(25, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = random_matrix(rng, 4, 6);
    const Matrix b = random_matrix(rng, 6, 4);
    CHECK(std::abs((a * b).trace() - (b * a).trace()) <= 1e-10);
  }
}

TEST_CASE("frobenius norm is basis independent") {
  RngStream rng(26, 0);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix a = random_matrix(rng, 5, 5);
    const Matrix phi = haar_orthonormal(rng, 5, 5);
    const Matrix psi = haar_orthonormal(rng, 5, 5);
    double sum_phi = 0.0;
    double sum_psi = 0.0;
    for (lrr::Index j = 0; j < 5; ++j) {
      sum_phi += (a * phi.col(j)).squaredNorm();
      sum_psi += (a * psi.col(j)).squaredNorm();
    }
    const double target = a.squaredNorm();
    CHECK(std::abs(sum_phi - target) <= 1e-8 * std::max(1.0, target));
    CHECK(std::abs(sum_psi - target) <= 1e-8 * std::max(1.0, target));
  }
}

TEST_CASE("nuclear norm triangle inequality") {
  RngStream rng(27, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix a = random_matrix(rng, 4, 5);
    const Matrix b = random_matrix(rng, 4, 5);
    CHECK(lrr::nuclear_norm(a + b) <=
          lrr::nuclear_norm(a) + lrr::nuclear_norm(b) + 1e-9);
  }
}

TEST_CASE("top singular pair attains the operator norm") {
  RngStream rng(28, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix a = random_matrix(rng, 5, 7);
    const auto f = lrr::svd(a);
    const double attained = f.u.col(0).dot(a * f.v.col(0));
    CHECK(std::abs(attained - f.sigmas(0)) <= 1e-9);
    CHECK(lrr::operator_norm(a) ==
          doctest::Approx(f.sigmas(0)).epsilon(1e-12));
  }
}

TEST_CASE("pinching never increases the nuclear norm") {
  RngStream rng(29, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix z = random_matrix(rng, 6, 6);
    const Matrix u = haar_orthonormal(rng, 6, 2);
    const Matrix pu = u * u.transpose();
    const Matrix pc = Matrix::Identity(6, 6) - pu;
    CHECK(lrr::nuclear_norm(pu * z * pu) + lrr::nuclear_norm(pc * z * pc) <=
          lrr::nuclear_norm(z) + 1e-9);
  }
}

}  // TEST_SUITE
