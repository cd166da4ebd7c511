#pragma once

#include <vector>

#include "wholm/core.hpp"

namespace wholm {

/// Adjusted values aligned with the problem's hypothesis order. `ordering`
/// is the permutation the recursion walked (weighted for WHP, raw for WAP).
struct AdjustedReport {
  std::vector<double> values;
  Procedure procedure = Procedure::Whp;
  OrderingPermutation ordering;
};

/// Adjusted weighted p-values:
///   a_(1) = min{p~_(1) * sum_k w*_(k), 1}
///   a_(i) = min{max{p~_(i) * sum_{k>=i} w*_(k), a_(i-1)}, 1}
/// The cap at 1 is applied at every rank, not only the first.
/// H_i is rejected by WHP at level a iff values[i] <= a.
AdjustedReport adjusted_whp(const TestingProblem& problem);

/// Adjusted p-values for WAP: the same recursion over the raw ordering with
/// (p_(i) / w_(i)) * sum_{k>=i} w_(k).
AdjustedReport adjusted_wap(const TestingProblem& problem);

}  // namespace wholm
