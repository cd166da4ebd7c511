#include <doctest.h>

#include <cmath>

#include "wholm/adjust.hpp"
#include "wholm/corpus.hpp"
#include "wholm/procedures.hpp"
#include "wholm/rng.hpp"

using namespace wholm;

namespace {

void check_values(const std::vector<double>& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    INFO("index " << i << ": " << got[i] << " vs " << want[i]);
    CHECK(std::fabs(got[i] - want[i]) <= tol);
  }
}

}  // namespace

TEST_CASE("three_hypothesis_example") {
  const auto problem = TestingProblem::from_values({0.01, 0.014, 0.3}, {1, 2, 3}, 0.05);
  check_values(adjusted_whp(problem).values, {0.042, 0.042, 0.3}, 1e-12);
  check_values(adjusted_wap(problem).values, {0.06, 0.06, 0.3}, 1e-12);
  CHECK(adjusted_whp(problem).ordering.perm == std::vector<std::size_t>{1, 0, 2});
  CHECK(adjusted_wap(problem).ordering.perm == std::vector<std::size_t>{0, 1, 2});
  CHECK(adjusted_wap(problem).procedure == Procedure::Wap);
}

TEST_CASE("ards_table") {
  const auto problem =
      TestingProblem::from_values({0.024, 0.003, 0.026, 0.002}, {0.9, 0.1, 0.5, 0.5}, 0.05);
  check_values(adjusted_whp(problem).values, {0.04, 0.04, 0.04, 0.008}, 1e-12);
  check_values(adjusted_wap(problem).values, {0.045, 0.045, 0.045, 0.008}, 1e-12);
}

TEST_CASE("diabetes_table") {
  const auto problem = TestingProblem::from_values({0.011, 0.023, 0.006, 0.018, 0.042, 0.088},
                                                   {6, 6, 5, 4, 2, 1}, 0.05);
  check_values(adjusted_whp(problem).values,
               {209.0 / 6000, 299.0 / 6000, 0.0288, 299.0 / 6000, 0.063, 0.088}, 1e-12);
  check_values(adjusted_wap(problem).values,
               {209.0 / 6000, 0.0585, 0.0288, 0.0585, 0.063, 0.088}, 1e-12);
  // the printed table rounds to 4 decimals
  check_values(adjusted_whp(problem).values, {0.0348, 0.0498, 0.0288, 0.0498, 0.0630, 0.0880}, 5e-5);
}

TEST_CASE("cap_at_one_applies_at_every_rank") {
  const auto problem = TestingProblem::from_values({0.9, 0.95}, {1, 1}, 0.05);
  const auto adj = adjusted_whp(problem);
  CHECK(adj.values[0] == 1.0);
  CHECK(adj.values[1] == 1.0);
  const auto mixed = TestingProblem::from_values({0.001, 0.8, 0.9}, {1, 1, 1}, 0.05);
  check_values(adjusted_wap(mixed).values, {0.003, 1.0, 1.0}, 1e-15);
}

TEST_CASE("adjusted_values_are_monotone_along_the_ordering") {
  Rng gen(101);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto problem = random_problem(gen, 1 + gen.index(10));
    for (const auto& adj : {adjusted_whp(problem), adjusted_wap(problem)}) {
      for (std::size_t r = 1; r < adj.ordering.perm.size(); ++r) {
        CHECK(adj.values[adj.ordering.perm[r - 1]] <= adj.values[adj.ordering.perm[r]]);
      }
      for (double v : adj.values) CHECK((v >= 0.0 && v <= 1.0));
    }
  }
}

TEST_CASE("adjusted_values_reproduce_decisions_at_any_level") {
  Rng gen(17);
  for (int trial = 0; trial < 3000; ++trial) {
    const double alpha = gen.uniform(0.001, 0.2);
    auto spec = CorpusSpec{0.2};
    spec.alpha = alpha;
    const auto problem = random_problem(gen, 1 + gen.index(8), spec);
    const auto whp = whp_stepdown(problem);
    const auto wap = wap_stepdown(problem);
    const auto a_whp = adjusted_whp(problem);
    const auto a_wap = adjusted_wap(problem);
    for (std::size_t i = 0; i < problem.size(); ++i) {
      CHECK((a_whp.values[i] <= alpha) == whp.contains(i));
      CHECK((a_wap.values[i] <= alpha) == wap.contains(i));
      CHECK(a_whp.values[i] <= a_wap.values[i]);
    }
  }
}
