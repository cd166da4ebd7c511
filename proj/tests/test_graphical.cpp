#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "wholm/corpus.hpp"
#include "wholm/error.hpp"
#include "wholm/graphical.hpp"
#include "wholm/procedures.hpp"
#include "wholm/rng.hpp"

using namespace wholm;

namespace {

// |a - b| within k units in the last place of the larger magnitude.
bool ulp_close(double a, double b, int k) {
  if (a == b) return true;
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= k * (std::nextafter(scale, INFINITY) - scale);
}

TestingProblem diverging() {
  return TestingProblem::from_values({0.01, 0.014, 0.3}, {1, 2, 3}, 0.05);
}

}  // namespace

TEST_CASE("initial_graph_matches_weights") {
  const std::vector<double> w{1, 2, 3};
  const auto g = initial_graph(w, 0.05);
  CHECK(g.local_alpha(0) == doctest::Approx(0.05 / 6));
  CHECK(g.local_alpha(1) == doctest::Approx(0.05 / 3));
  CHECK(g.local_alpha(2) == doctest::Approx(0.05 / 2));
  CHECK(g.transition(0, 1) == doctest::Approx(2.0 / 5));
  CHECK(g.transition(0, 2) == doctest::Approx(3.0 / 5));
  CHECK(g.transition(1, 0) == doctest::Approx(1.0 / 4));
  CHECK(g.transition(2, 1) == doctest::Approx(2.0 / 3));
  CHECK(g.transition(1, 1) == 0.0);
  CHECK(g.total_alpha() == doctest::Approx(0.05));
  CHECK(g.active_count() == 3);
}

TEST_CASE("single_node_graph") {
  const auto g = initial_graph(std::vector<double>{4.0}, 0.05);
  CHECK(g.local_alpha(0) == doctest::Approx(0.05));
  const auto after = reject_and_update(g, 0);
  CHECK(after.active_count() == 0);
  CHECK(after.total_alpha() == 0.0);
}

TEST_CASE("update_rule_by_hand") {
  const auto g = reject_and_update(initial_graph(std::vector<double>{1, 2, 3}, 0.05), 1);
  CHECK_FALSE(g.is_active(1));
  CHECK(g.local_alpha(1) == 0.0);
  CHECK(g.local_alpha(0) == doctest::Approx(0.05 / 4));
  CHECK(g.local_alpha(2) == doctest::Approx(0.05 * 3 / 4));
  CHECK(g.transition(0, 2) == doctest::Approx(1.0));
  CHECK(g.transition(2, 0) == doctest::Approx(1.0));
  CHECK(g.transition(0, 1) == 0.0);
  CHECK_THROWS_AS(reject_and_update(g, 1), UsageError);
  CHECK(g.active_indices() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("constructor_validation") {
  CHECK_THROWS_AS(TransitionGraph({0.01, -0.01}, {0, 1, 1, 0}), ValidationError);
  CHECK_THROWS_AS(TransitionGraph({0.01, 0.01}, {0, 1.5, 1, 0}), ValidationError);
  CHECK_THROWS_AS(TransitionGraph({0.01, 0.01, 0.01}, {0, 0.7, 0.7, 0, 0, 0, 0, 0, 0}),
                  ValidationError);
  CHECK_THROWS_AS(TransitionGraph({0.01, 0.01}, {0, 1}), ValidationError);
  CHECK_NOTHROW(TransitionGraph({0.01, 0.01}, {0, 1, 1, 0}));
}

TEST_CASE("vanishing_denominator_is_an_invariant_error") {
  // g_01 = g_10 = 1 with a third node: removing 1 makes 1 - g_01 g_10 = 0.
  const TransitionGraph g({0.01, 0.01, 0.01}, {0, 1, 0, 1, 0, 0, 0.5, 0.5, 0});
  CHECK_THROWS_AS(reject_and_update(g, 1), InvariantError);
}

TEST_CASE("updates_track_the_closed_form") {
  Rng gen(77);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 2 + gen.index(9);
    std::vector<double> w(m);
    for (auto& v : w) v = gen.uniform(0.5, 5.0);
    auto g = initial_graph(w, 0.05);
    std::vector<bool> active(m, true);
    // remove nodes in a random order, comparing with the closed form each time
    for (std::size_t left = m; left > 1; --left) {
      const auto ids = g.active_indices();
      const std::size_t j = ids[gen.index(ids.size())];
      g = reject_and_update(g, j);
      active[j] = false;
      const auto ref = oracle::closed_form_graph(w, 0.05, active);
      for (std::size_t l = 0; l < m; ++l) {
        CHECK(ulp_close(g.local_alpha(l), ref.level[l], 8));
        for (std::size_t k = 0; k < m; ++k) {
          if (k != l) CHECK(ulp_close(g.transition(l, k), ref.g[l * m + k], 8));
        }
      }
      CHECK(g.total_alpha() == doctest::Approx(0.05).epsilon(1e-13));
    }
  }
}

TEST_CASE("graphical_runs_on_the_diverging_example") {
  const auto problem = diverging();
  const auto raw = run_graphical(problem, OrderKey::Raw);
  CHECK(raw.rejections.empty());
  CHECK(raw.trace.empty());

  const auto weighted = run_graphical(problem, OrderKey::Weighted);
  CHECK(weighted.rejections.rejected() == std::vector<std::size_t>{0, 1});
  REQUIRE(weighted.trace.size() == 2);
  CHECK(weighted.trace[0].rejected == 1);
  CHECK(weighted.trace[1].rejected == 0);
  CHECK(weighted.trace[1].after.local_alpha(2) == doctest::Approx(0.05));
}

TEST_CASE("graphical_equals_stepdown") {
  Rng gen(4242);
  for (int trial = 0; trial < 5000; ++trial) {
    const auto problem = random_problem(gen, 1 + gen.index(10), CorpusSpec{trial % 2 ? 0.1 : 1.0});
    CHECK(run_graphical(problem, OrderKey::Weighted).rejections.same_rejections(whp_stepdown(problem)));
    CHECK(run_graphical(problem, OrderKey::Raw).rejections.same_rejections(wap_stepdown(problem)));
  }
}

TEST_CASE("format_coefficient_cases") {
  CHECK(format_coefficient(2.0 / 5.0) == "2/5");
  CHECK(format_coefficient(1.0) == "1");
  CHECK(format_coefficient(0.0) == "0");
  CHECK(format_coefficient(1.0 / 3.0) == "1/3");
  CHECK(format_coefficient(123.0 / 997.0) == "123/997");
  CHECK(format_coefficient(1.0 / 1000003.0) == "0.000001");
  CHECK(format_coefficient(std::sqrt(0.5)) == "0.707107");
}

TEST_CASE("dot_export_initial_graph") {
  const auto problem = diverging();
  const auto initial = initial_graph(problem.w(), problem.alpha());
  const auto dots = export_dot({}, initial, problem.labels());
  REQUIRE(dots.size() == 1);
  const std::string expected =
      "digraph stage_0 {\n"
      "  rankdir=LR;\n"
      "  node [shape=circle, style=filled];\n"
      "  n0 [label=\"H1\\n0.0083\", fillcolor=red];\n"
      "  n1 [label=\"H2\\n0.0167\", fillcolor=red];\n"
      "  n2 [label=\"H3\\n0.0250\", fillcolor=red];\n"
      "  n0 -> n1 [label=\"2/5\"];\n"
      "  n0 -> n2 [label=\"3/5\"];\n"
      "  n1 -> n0 [label=\"1/4\"];\n"
      "  n1 -> n2 [label=\"3/4\"];\n"
      "  n2 -> n0 [label=\"1/3\"];\n"
      "  n2 -> n1 [label=\"2/3\"];\n"
      "}\n";
  CHECK(dots[0] == expected);
}

TEST_CASE("dot_export_marks_rejections") {
  const auto problem = diverging();
  const auto run = run_graphical(problem, OrderKey::Weighted);
  const auto dots = export_dot(run.trace, initial_graph(problem.w(), problem.alpha()),
                               problem.labels());
  REQUIRE(dots.size() == 3);
  const std::string expected =
      "digraph stage_1 {\n"
      "  rankdir=LR;\n"
      "  node [shape=circle, style=filled];\n"
      "  n0 [label=\"H1\\n0.0125\", fillcolor=red];\n"
      "  n1 [label=\"H2\", rejected=true, fillcolor=yellow];\n"
      "  n2 [label=\"H3\\n0.0375\", fillcolor=red];\n"
      "  n0 -> n2 [label=\"1\"];\n"
      "  n2 -> n0 [label=\"1\"];\n"
      "}\n";
  CHECK(dots[1] == expected);
  CHECK(dots[2].find("n0 [label=\"H1\", rejected=true") != std::string::npos);
  CHECK(dots[2].find("n2 [label=\"H3\\n0.0500\"") != std::string::npos);
  CHECK(dots[2].find("->") == std::string::npos);
  CHECK_THROWS_AS(export_dot(run.trace, initial_graph(problem.w(), 0.05),
                             std::vector<std::string>{"a"}),
                  UsageError);
}
