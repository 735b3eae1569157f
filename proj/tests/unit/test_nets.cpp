#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <lrr/linalg.hpp>
#include <lrr/nets.hpp>
#include <lrr/rng.hpp>

#include "doctest.h"
#include "test_util.hpp"

using lrr::Matrix;
using lrr::Net;
using lrr::RngStream;
using lrr::Vector;
using lrr_test::haar_orthonormal;
using lrr_test::random_matrix;
using lrr_test::random_unit_vector;

namespace {

double min_frobenius_dist(const Net& net, const Matrix& target) {
  double best = std::numeric_limits<double>::infinity();
  for (const Matrix& e : net.elements) {
    best = std::min(best, (e - target).norm());
  }
  return best;
}

double min_two_inf_dist(const Net& net, const Matrix& target) {
  double best = std::numeric_limits<double>::infinity();
  for (const Matrix& e : net.elements) {
    best = std::min(best, lrr::dist_two_inf(e, target));
  }
  return best;
}

}  // namespace

TEST_SUITE("nets") {

TEST_CASE("cardinality bound formula") {
  CHECK(lrr::net_cardinality_bound(0.5, 2.0) ==
        doctest::Approx(25.0).epsilon(1e-12));
  CHECK(lrr::net_cardinality_bound(1.0, 1.0) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(lrr::net_cardinality_bound(0.0, 2.0), std::invalid_argument);
}

TEST_CASE("row-wise max distance") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 1;
  b << 0, 0, 0, 1;
  CHECK(lrr::dist_two_inf(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(lrr::dist_two_inf(a, Matrix::Zero(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("zero-dimensional sphere net is the sign pair") {
  RngStream rng(60, 0);
  const Net net = lrr::sphere_net(1, 0.5, rng);
  REQUIRE(net.elements.size() == 2);
  std::vector<double> vals = {net.elements[0](0, 0), net.elements[1](0, 0)};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sphere net respects packing, cardinality, and covering") {
  RngStream rng(61, 0);
  const Net small = lrr::sphere_net(2, 0.5, rng);
  CHECK(small.elements.size() <= 25);

  const double eps = 0.7;
  const Net net = lrr::sphere_net(3, eps, rng);
  CHECK(static_cast<double>(net.elements.size()) <=
        lrr::net_cardinality_bound(eps, 3.0));
  for (const Matrix& e : net.elements) {
    CHECK(std::abs(e.norm() - 1.0) <= 1e-10);
  }
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < net.elements.size(); ++j) {
      CHECK((net.elements[i] - net.elements[j]).norm() >= eps - 1e-12);
    }
  }
  // The rejection-streak stopping rule approximates maximality, so a small
  // uncovered remnant (mass on the order of the inverse streak length) can
  // survive; covering is therefore checked statistically, with a hard cap on
  // how far any point can sit outside the net.
  int covered = 0;
  double worst = 0.0;
  for (int d = 0; d < 10000; ++d) {
    const Vector x = random_unit_vector(rng, 3);
    const double dist = min_frobenius_dist(net, x);
    if (dist <= eps + 1e-12) ++covered;
    worst = std::max(worst, dist);
  }
  CHECK(covered >= 9900);
  CHECK(worst <= 1.25 * eps);
}

TEST_CASE("ball net covers the interval and the origin") {
  RngStream rng(62, 0);
  const Net line = lrr::ball_net(1, 1.0, rng);
  CHECK(line.elements.size() <= 3);
  for (int i = 0; i <= 200; ++i) {
    Matrix x(1, 1);
    x(0, 0) = -1.0 + i / 100.0;
    CHECK(min_frobenius_dist(line, x) <= 1.0 + 1e-12);
  }
  Matrix origin = Matrix::Zero(1, 1);
  CHECK(min_frobenius_dist(line, origin) <= 1.0 + 1e-12);

  const double eps = 0.6;
  const Net net = lrr::ball_net(2, eps, rng);
  for (const Matrix& e : net.elements) {
    CHECK(e.norm() <= 1.0 + 1e-10);
  }
  for (int d = 0; d < 10000; ++d) {
    Vector x(2);
    do {
      x(0) = 2.0 * rng.next_unit() - 1.0;
      x(1) = 2.0 * rng.next_unit() - 1.0;
    } while (x.norm() > 1.0);
    CHECK(min_frobenius_dist(net, x) <= eps + 1e-12);
  }
  CHECK(min_frobenius_dist(net, Matrix::Zero(2, 1)) <= eps + 1e-12);
}

TEST_CASE("trivial stiefel net is the sign pair") {
  RngStream rng(63, 0);
  const Net net = lrr::stiefel_net(1, 1, 0.5, rng);
  REQUIRE(net.elements.size() == 2);
  std::vector<double> vals = {net.elements[0](0, 0), net.elements[1](0, 0)};
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stiefel net elements are orthonormal and cover") {
  RngStream rng(64, 0);
  const double eps = 0.7;
  const int n = 3;
  const int k = 2;
  const Net net = lrr::stiefel_net(n, k, eps, rng);
  CHECK(static_cast<double>(net.elements.size()) <=
        lrr::net_cardinality_bound(eps, static_cast<double>(n) * k));
  for (const Matrix& e : net.elements) {
    REQUIRE(e.rows() == k);
    REQUIRE(e.cols() == n);
    CHECK((e * e.transpose() - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <=
          1e-10);
  }
  for (int d = 0; d < 1000; ++d) {
    const Matrix v = haar_orthonormal(rng, n, k).transpose();
    CHECK(min_two_inf_dist(net, v) <= 2.0 * eps + 1e-9);
  }
}

TEST_CASE("scalar low-rank net covers the interval") {
  RngStream rng(65, 0);
  const Net net = lrr::lowrank_net(1, 1, 1, 0.5, rng);
  for (const Matrix& e : net.elements) {
    CHECK(std::abs(e(0, 0)) <= 1.0 + 1e-10);
  }
  for (int i = 0; i <= 200; ++i) {
    Matrix x(1, 1);
    x(0, 0) = -1.0 + i / 100.0;
    CHECK(min_frobenius_dist(net, x) <= 0.5 + 1e-12);
  }
}

TEST_CASE("low-rank net elements satisfy rank and norm caps and cover") {
  RngStream rng(66, 0);
  const double rho = 1.0;
  const Net net = lrr::lowrank_net(2, 2, 1, rho, rng);
  for (const Matrix& e : net.elements) {
    CHECK(e.norm() <= 1.0 + 1e-10);
    CHECK(lrr::svd(e).numerical_rank <= 1);
  }
  for (int d = 0; d < 1000; ++d) {
    const Vector u = random_unit_vector(rng, 2);
    const Vector v = random_unit_vector(rng, 2);
    const Matrix target = u * v.transpose();
    CHECK(min_frobenius_dist(net, target) <= rho + 1e-9);
  }
}

TEST_CASE("net constructors reject infeasible cardinality caps") {
  RngStream rng(67, 0);
  CHECK_THROWS_AS(lrr::sphere_net(40, 0.1, rng, 1000), std::invalid_argument);
  CHECK_THROWS_AS(lrr::lowrank_net(6, 6, 2, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(lrr::sphere_net(2, -0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(lrr::stiefel_net(2, 3, 0.5, rng), std::invalid_argument);
  CHECK_THROWS_AS(lrr::lowrank_net(3, 3, 0, 0.5, rng), std::invalid_argument);
}

TEST_CASE("net-based operator norm bound brackets the true norm") {
  RngStream rng(68, 0);
  const Net net2 = lrr::sphere_net(2, 0.5, rng);
  const Matrix eye = Matrix::Identity(2, 2);
  const double eye_bound = lrr::net_operator_norm_bound(
      [&](const Vector& x) { return Vector(eye * x); }, net2, 0.5);
  CHECK(eye_bound == doctest::Approx(2.0).epsilon(1e-9));

  const double zero_bound = lrr::net_operator_norm_bound(
      [](const Vector& x) { return Vector(Vector::Zero(x.size())); }, net2, 0.5);
  CHECK(zero_bound == doctest::Approx(0.0).epsilon(1e-14));

  const double eps = 0.5;
  const Net net5 = lrr::sphere_net(5, eps, rng);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix a = random_matrix(rng, 5, 5);
    const double sigma1 = lrr::operator_norm(a);
    const double bound = lrr::net_operator_norm_bound(
        [&](const Vector& x) { return Vector(a * x); }, net5, eps);
    CHECK(bound >= sigma1 - 1e-9);
    CHECK(bound <= sigma1 / (1.0 - eps) + 1e-9);
  }
}

TEST_CASE("ambient names are stable identifiers") {
  CHECK(lrr::net_ambient_name(lrr::NetAmbient::Sphere) == "sphere");
  CHECK(lrr::net_ambient_name(lrr::NetAmbient::Ball) == "ball");
  CHECK(lrr::net_ambient_name(lrr::NetAmbient::Stiefel) == "stiefel");
  CHECK(lrr::net_ambient_name(lrr::NetAmbient::LowRank) == "lowrank");
}

}  // TEST_SUITE
