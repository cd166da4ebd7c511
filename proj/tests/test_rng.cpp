#include <doctest.h>

#include <cmath>

#include "wholm/rng.hpp"

using namespace wholm;

TEST_CASE("same_seed_same_stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.normal() == b.normal());
  }
}

TEST_CASE("adjacent_seeds_differ_early") {
  Rng a(42), b(43);
  int same = 0;
  for (int i = 0; i < 10; ++i) same += a.next_u64() == b.next_u64() ? 1 : 0;
  CHECK(same == 0);
}

TEST_CASE("substreams_are_distinct_and_reproducible") {
  auto a = Rng::substream(7, 0);
  auto b = Rng::substream(7, 1);
  auto c = Rng::substream(7, 0);
  CHECK(a.next_u64() != b.next_u64());
  c.next_u64();
  CHECK(a.next_u64() == c.next_u64());
  CHECK(Rng::substream(7, 1).next_u64() != Rng::substream(8, 0).next_u64());
}

TEST_CASE("frozen_first_outputs") {
  // Pins the cross-platform stream; changing the seeding breaks replays.
  Rng gen(0);
  const auto first = gen.next_u64();
  Rng again(0);
  CHECK(again.next_u64() == first);
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("uniform_mean") {
  Rng gen(2025);
  double sum = 0.0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double u = gen.uniform();
    REQUIRE((u >= 0.0 && u < 1.0));
    sum += u;
  }
  CHECK(std::fabs(sum / n - 0.5) < 0.002);
}

TEST_CASE("normal_moments") {
  Rng gen(9);
  const int n = 400'000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = gen.normal();
    s1 += z;
    s2 += z * z;
  }
  CHECK(std::fabs(s1 / n) < 0.01);
  CHECK(std::fabs(s2 / n - 1.0) < 0.01);
}

TEST_CASE("index_is_in_range_and_balanced") {
  Rng gen(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = gen.index(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  CHECK(gen.index(1) == 0);
}

TEST_CASE("uniform_range") {
  Rng gen(5);
  for (int i = 0; i < 10000; ++i) {
    const double v = gen.uniform(2.0, 10.0);
    CHECK((v >= 2.0 && v < 10.0));
  }
}
