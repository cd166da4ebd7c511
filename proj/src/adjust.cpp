#include "wholm/adjust.hpp"

#include <algorithm>

#include "wholm/procedures.hpp"

namespace wholm {

namespace {

AdjustedReport step_down_adjust(const TestingProblem& problem, Procedure procedure,
                                OrderingPermutation ordering,
                                const std::vector<double>& weighted) {
  const auto tails = tail_weight_sums(problem.w(), ordering.perm);
  AdjustedReport report;
  report.procedure = procedure;
  report.values.assign(problem.size(), 0.0);
  double running = 0.0;
  for (std::size_t r = 0; r < ordering.perm.size(); ++r) {
    const std::size_t i = ordering.perm[r];
    running = std::min(std::max(weighted[i] * tails[r], running), 1.0);
    report.values[i] = running;
  }
  report.ordering = std::move(ordering);
  return report;
}

}  // namespace

AdjustedReport adjusted_whp(const TestingProblem& problem) {
  auto weighted = weighted_pvalues(problem).values;
  auto ordering = order(weighted, OrderKey::Weighted);
  return step_down_adjust(problem, Procedure::Whp, std::move(ordering), weighted);
}

AdjustedReport adjusted_wap(const TestingProblem& problem) {
  // Same quotient p_i / w_i, but walked in raw p order.
  auto weighted = weighted_pvalues(problem).values;
  auto ordering = order(problem.p(), OrderKey::Raw);
  return step_down_adjust(problem, Procedure::Wap, std::move(ordering), weighted);
}

}  // namespace wholm
