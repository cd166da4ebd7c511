#pragma once

#include <cstddef>

#include "wholm/core.hpp"
#include "wholm/rng.hpp"

namespace wholm {

/// Distribution of the seeded random problems used by property checks.
/// Defaults: p ~ U[0,1], w ~ U[0.5,5], alpha = 0.05. A smaller p_max gives
/// a corpus where most problems reject something.
struct CorpusSpec {
  double p_max = 1.0;
  double w_lo = 0.5;
  double w_hi = 5.0;
  double alpha = 0.05;
};

TestingProblem random_problem(Rng& gen, std::size_t m, const CorpusSpec& spec = {});

}  // namespace wholm
