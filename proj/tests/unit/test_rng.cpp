#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include <lrr/rng.hpp>

#include "doctest.h"

using lrr::RngStream;

TEST_SUITE("rng") {

TEST_CASE("identical seed and stream give identical sequences") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 64; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 7);
  RngStream d(42, 7);
  for (int i = 0; i < 64; ++i) {
    CHECK(c.next_gaussian() == d.next_gaussian());
    CHECK(c.next_unit() == d.next_unit());
    CHECK(c.next_sign() == d.next_sign());
  }
}

TEST_CASE("different stream ids decorrelate") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int agree = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++agree;
  }
  CHECK(agree == 0);
}

TEST_CASE("different seeds decorrelate") {
  RngStream a(1, 0);
  RngStream b(2, 0);
  int agree = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++agree;
  }
  CHECK(agree == 0);
}

TEST_CASE("fork ignores how many draws the parent has made") {
  RngStream fresh(99, 3);
  RngStream burned(99, 3);
  for (int i = 0; i < 1000; ++i) burned.next_u64();
  RngStream f1 = fresh.fork(5);
  RngStream f2 = burned.fork(5);
  for (int i = 0; i < 32; ++i) {
    CHECK(f1.next_u64() == f2.next_u64());
  }
}

TEST_CASE("fork children are mutually distinct and differ from the parent") {
  RngStream root(7, 0);
  std::set<std::uint64_t> firsts;
  for (std::uint64_t k = 0; k < 100; ++k) {
    RngStream child = root.fork(k);
    firsts.insert(child.next_u64());
  }
  RngStream parent(7, 0);
  firsts.insert(parent.next_u64());
  CHECK(firsts.size() == 101);
}

TEST_CASE("seed and stream id accessors round-trip") {
  RngStream s(123456789, 42);
  CHECK(s.seed() == 123456789);
  CHECK(s.stream_id() == 42);
}

TEST_CASE("next_unit stays in the half-open unit interval") {
  RngStream s(5, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("next_gaussian has standard moments") {
  RngStream s(6, 0);
  const int n = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("next_sign is a fair coin on plus and minus one") {
  RngStream s(8, 0);
  const int n = 100000;
  long pluses = 0;
  for (int i = 0; i < n; ++i) {
    const int v = s.next_sign();
    REQUIRE((v == 1 || v == -1));
    if (v == 1) ++pluses;
  }
  CHECK(std::abs(static_cast<double>(pluses) / n - 0.5) < 0.015);
}

TEST_CASE("next_below respects its bound") {
  RngStream s(9, 0);
  for (int i = 0; i < 10000; ++i) {
    CHECK(s.next_below(17) < 17);
  }
  for (int i = 0; i < 100; ++i) {
    CHECK(s.next_below(1) == 0);
  }
  CHECK_THROWS_AS(s.next_below(0), std::invalid_argument);
}

TEST_CASE("next_below is close to uniform") {
  RngStream s(10, 0);
  const int bound = 10;
  std::vector<long> counts(bound, 0);
  const long n = 100000;
  for (long i = 0; i < n; ++i) ++counts[s.next_below(bound)];
  for (int v = 0; v < bound; ++v) {
    CHECK(std::abs(static_cast<double>(counts[v]) / n - 0.1) < 0.01);
  }
}

}  // TEST_SUITE
