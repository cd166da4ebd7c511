#pragma once

// Seeded property battery: step-down procedures against brute-force closed
// testing and the graphical algorithm, dominance of WHP over WAP, and the
// consonance / monotonicity structure of both.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wholm {

struct PropertyOutcome {
  std::string name;
  bool passed = false;
  std::size_t cases = 0;
  std::string detail;  // first failure, or a short summary
};

struct BatteryConfig {
  std::size_t trials = 10000;   // random problems in the corpus
  std::uint64_t seed = 0;
  std::size_t max_m = 8;        // m ~ U{1..max_m}
  /// Problems with m above this skip the Def 3.2 check.
  std::size_t monotonicity_max_m = 8;
  /// Trials given to each p-value monotonicity search.
  std::size_t search_trials = 100000;
};

/// Even-numbered problems draw p ~ U[0,1], odd ones p ~ U[0,0.1] so that
/// long rejection chains are common. Outcomes come back in a fixed order.
std::vector<PropertyOutcome> run_property_battery(const BatteryConfig& config);

}  // namespace wholm
