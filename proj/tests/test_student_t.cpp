#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wholm/error.hpp"
#include "wholm/rng.hpp"
#include "wholm/student_t.hpp"

using namespace wholm;

TEST_CASE("sf_at_zero_is_exactly_half") {
  for (double df : {1.0, 2.0, 14.0, 100.0}) CHECK(StudentT(df).sf(0.0) == 0.5);
}

TEST_CASE("quantile_of_t14") {
  CHECK(std::fabs(student_t_sf(1.7613, 14) - 0.05) < 1e-4);
  CHECK(std::fabs(oracle::t_quantile_bisection(0.05, 14) - 1.7613) < 1e-4);
}

TEST_CASE("closed_forms") {
  // df = 1 is Cauchy; df = 2 has sf = 1/2 - t / (2 sqrt(2 + t^2)).
  for (double t : {-3.0, -0.5, 0.25, 1.0, 7.0}) {
    CHECK(std::fabs(student_t_sf(t, 1) - (0.5 - std::atan(t) / M_PI)) < 1e-13);
    CHECK(std::fabs(student_t_sf(t, 2) - (0.5 - t / (2 * std::sqrt(2 + t * t)))) < 1e-13);
  }
}

TEST_CASE("symmetry") {
  Rng gen(6);
  for (int i = 0; i < 200; ++i) {
    const double t = gen.uniform(0, 8);
    const double df = 1 + gen.index(60);
    CHECK(std::fabs(student_t_sf(t, df) + student_t_sf(-t, df) - 1.0) < 1e-14);
  }
}

TEST_CASE("matches_quadrature_oracle") {
  Rng gen(8);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + gen.index(59);
    const double t = gen.uniform(-6, 6);
    const double df = static_cast<double>(n - 1);
    INFO("n=" << n << " t=" << t);
    CHECK(std::fabs(student_t_sf(t, df) - oracle::t_sf_quadrature(t, df)) < 1e-9);
  }
}

TEST_CASE("incomplete_beta_edges") {
  CHECK(regularized_incomplete_beta(0.0, 1.0, 2.0, 3.0) == 0.0);
  CHECK(regularized_incomplete_beta(1.0, 0.0, 2.0, 3.0) == 1.0);
  // I_x(1, 1) = x, I_x(a, 1) = x^a
  CHECK(std::fabs(regularized_incomplete_beta(0.3, 0.7, 1, 1) - 0.3) < 1e-15);
  CHECK(std::fabs(regularized_incomplete_beta(0.6, 0.4, 3, 1) - 0.216) < 1e-14);
}

TEST_CASE("tail_accuracy") {
  const double p = student_t_sf(30.0, 10);
  CHECK(p > 0.0);
  CHECK(p < 1e-10);
  CHECK(student_t_sf(-30.0, 10) < 1.0);
}
