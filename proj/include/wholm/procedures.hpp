#pragma once

#include <span>

#include "wholm/core.hpp"

namespace wholm {

/// Weighted Holm: order by p_i / w_i and reject the rank-j hypothesis while
/// p~_(j) <= alpha / (sum of weights at ranks >= j). Stops at the first
/// failure. Trace thresholds are on the raw p scale (w_(j) * alpha / tail).
RejectionSet whp_stepdown(const TestingProblem& problem);

/// Weighted alternative Holm: order by raw p and reject while
/// p_(j) <= (w_(j) / tail weight sum) * alpha. These thresholds need not
/// increase with j; the procedure still stops at the first failure.
RejectionSet wap_stepdown(const TestingProblem& problem);

/// Unweighted Holm with thresholds alpha / (m - j + 1).
RejectionSet holm_stepdown(std::span<const double> p, double alpha);

/// Generic step-down over weighted p-values with nondecreasing positive
/// critical values indexed by rank: reject H*_(i) iff p~_(j) <= c_j for all
/// j <= i. Trace thresholds are w * c_j capped at 1.
RejectionSet weighted_stepdown(const TestingProblem& problem,
                               std::span<const double> critical_values);

/// Dispatches on the procedure tag (Holm ignores the weights).
RejectionSet run_procedure(Procedure procedure, const TestingProblem& problem);

/// tails[r] = sum of w[perm[k]] for k >= r, correctly rounded, so equal
/// index sets give bitwise-equal sums.
std::vector<double> tail_weight_sums(std::span<const double> w,
                                     std::span<const std::size_t> perm);

}  // namespace wholm
