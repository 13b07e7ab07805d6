#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "gemcmc/rng.hpp"

using gemcmc::RngStream;

TEST_CASE("identical seeds give identical streams") {
  RngStream a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42), d(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
    CHECK(c.uniform_index(17) == d.uniform_index(17));
  }
}

TEST_CASE("split streams are reproducible and distinct") {
  RngStream parent(7);
  RngStream child_a = parent.split(1);
  // consuming the parent does not change what split produces
  for (int i = 0; i < 57; ++i) parent.next_u64();
  RngStream child_a2 = parent.split(1);
  CHECK(child_a.next_u64() == child_a2.next_u64());

  RngStream child_b = parent.split(2);
  CHECK(parent.split(1).seed() != child_b.seed());
  // nested splits do not commute
  CHECK(parent.split(1).split(2).seed() != parent.split(2).split(1).seed());
}

TEST_CASE("uniform lies in [0,1) and uniform_index covers its range") {
  RngStream rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    seen.insert(rng.uniform_index(5));
  }
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4});
  CHECK_THROWS(rng.uniform_index(0));
}

TEST_CASE("normal moments") {
  RngStream rng(11);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 0.02);
}
