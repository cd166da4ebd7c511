#include "wholm/check.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "wholm/adjust.hpp"
#include "wholm/closure.hpp"
#include "wholm/corpus.hpp"
#include "wholm/graphical.hpp"
#include "wholm/procedures.hpp"
#include "wholm/rng.hpp"

namespace wholm {
namespace {

std::string describe(const TestingProblem& problem, std::size_t trial) {
  std::ostringstream out;
  out.precision(17);
  out << "problem " << trial << ": p=(";
  for (std::size_t i = 0; i < problem.size(); ++i) out << (i ? "," : "") << problem.p()[i];
  out << ") w=(";
  for (std::size_t i = 0; i < problem.size(); ++i) out << (i ? "," : "") << problem.w()[i];
  out << ")";
  return out.str();
}

// Accumulates a per-problem predicate; keeps the first failure.
struct Tally {
  PropertyOutcome outcome;

  explicit Tally(std::string name) {
    outcome.name = std::move(name);
    outcome.passed = true;
  }

  void observe(bool ok, const std::function<std::string()>& why) {
    ++outcome.cases;
    if (!ok && outcome.passed) {
      outcome.passed = false;
      outcome.detail = why();
    }
  }
};

bool adjusted_consistent(const AdjustedReport& adj, const RejectionSet& rejections,
                         double alpha) {
  for (std::size_t i = 0; i < adj.values.size(); ++i) {
    if ((adj.values[i] <= alpha) != rejections.contains(i)) return false;
  }
  return true;
}

}  // namespace

std::vector<PropertyOutcome> run_property_battery(const BatteryConfig& config) {
  Tally whp_ctp("whp_stepdown_equals_ctp");
  Tally wap_ctp("wap_stepdown_equals_ctp");
  Tally whp_graph("whp_stepdown_equals_graphical");
  Tally wap_graph("wap_stepdown_equals_graphical");
  Tally containment("wap_rejections_within_whp");
  Tally adjusted_order("adjusted_whp_at_most_adjusted_wap");
  Tally adjusted_match("adjusted_values_match_decisions");
  Tally consonance("consonance_both_local_tests");
  Tally whp_mono("whp_monotonicity_condition_holds");
  PropertyOutcome wap_mono{"wap_monotonicity_condition_fails_somewhere", false, 0,
                           "no counterexample among problems with divergent orderings"};

  const CorpusSpec wide{};
  CorpusSpec dense;
  dense.p_max = 0.1;

  Rng gen(config.seed);
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    const std::size_t m = 1 + gen.index(config.max_m);
    const auto problem = random_problem(gen, m, trial % 2 == 0 ? wide : dense);
    const auto why = [&] { return describe(problem, trial); };

    const auto whp = whp_stepdown(problem);
    const auto wap = wap_stepdown(problem);
    whp_ctp.observe(whp.same_rejections(ctp(problem, &whp_local_test).elementary_rejections), why);
    wap_ctp.observe(wap.same_rejections(ctp(problem, &wap_local_test).elementary_rejections), why);
    whp_graph.observe(whp.same_rejections(run_graphical(problem, OrderKey::Weighted).rejections), why);
    wap_graph.observe(wap.same_rejections(run_graphical(problem, OrderKey::Raw).rejections), why);
    containment.observe(wap.is_subset_of(whp), why);

    const auto adj_whp = adjusted_whp(problem);
    const auto adj_wap = adjusted_wap(problem);
    bool ordered = true;
    for (std::size_t i = 0; i < m; ++i) ordered = ordered && adj_whp.values[i] <= adj_wap.values[i];
    adjusted_order.observe(ordered, why);
    adjusted_match.observe(adjusted_consistent(adj_whp, whp, problem.alpha()) &&
                               adjusted_consistent(adj_wap, wap, problem.alpha()),
                           why);

    consonance.observe(check_consonance(problem, &whp_local_test).holds &&
                           check_consonance(problem, &wap_local_test).holds,
                       why);

    if (m <= config.monotonicity_max_m) {
      whp_mono.observe(check_monotonicity_condition(problem, Procedure::Whp).holds, why);
      ++wap_mono.cases;
      if (!wap_mono.passed && raw_order(problem).perm != weighted_order(problem).perm) {
        const auto report = check_monotonicity_condition(problem, Procedure::Wap);
        if (!report.holds) {
          const auto& c = *report.counterexample;
          std::ostringstream out;
          out << describe(problem, trial) << " I=0x" << std::hex << c.larger.bits()
              << " J=0x" << c.smaller.bits() << std::dec << " i=" << c.hypothesis
              << " alpha_i(I)=" << c.level_in_larger << " > alpha_i(J)=" << c.level_in_smaller;
          wap_mono.passed = true;
          wap_mono.detail = out.str();
        }
      }
    }
  }

  std::vector<PropertyOutcome> outcomes;
  for (auto* t : {&whp_ctp, &wap_ctp, &whp_graph, &wap_graph, &containment, &adjusted_order,
                  &adjusted_match, &consonance, &whp_mono}) {
    outcomes.push_back(std::move(t->outcome));
  }
  outcomes.push_back(std::move(wap_mono));

  // Lowering p-values: WAP must be caught losing rejections, WHP never.
  {
    PropertyOutcome found{"wap_pvalue_monotonicity_violation_found", false,
                          config.search_trials, "no violation found"};
    const auto hit = find_pvalue_monotonicity_violation(Procedure::Wap, config.search_trials,
                                                        mix64(config.seed ^ 0x5741'5000));
    if (hit) {
      bool lowered = true;
      for (std::size_t i = 0; i < hit->original.size(); ++i) {
        lowered = lowered && hit->lowered.p()[i] <= hit->original.p()[i];
      }
      const auto before = wap_stepdown(hit->original).size();
      const auto after = wap_stepdown(hit->lowered).size();
      found.passed = lowered && after < before;
      std::ostringstream out;
      out << "trial " << hit->trial << ": " << before << " -> " << after
          << " rejections; " << describe(hit->original, hit->trial);
      found.detail = out.str();
    }
    outcomes.push_back(std::move(found));

    PropertyOutcome none{"whp_pvalue_monotonicity_no_violation", true, config.search_trials,
                         ""};
    const auto miss = find_pvalue_monotonicity_violation(Procedure::Whp, config.search_trials,
                                                         mix64(config.seed ^ 0x5748'5000));
    if (miss) {
      none.passed = false;
      none.detail = describe(miss->original, miss->trial);
    }
    outcomes.push_back(std::move(none));
  }
  return outcomes;
}

}  // namespace wholm
