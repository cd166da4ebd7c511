#pragma once

// Brute-force closed testing with the two weighted local tests, plus
// checkers for consonance and the two monotonicity notions.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

#include "wholm/core.hpp"

namespace wholm {

inline constexpr std::size_t kMaxCtpHypotheses = 20;
inline constexpr std::size_t kMaxMonotonicityHypotheses = 12;

/// Nonempty subset of hypothesis indices, bit i <-> hypothesis i.
class IntersectionIndex {
 public:
  constexpr explicit IntersectionIndex(std::uint32_t bits) : bits_(bits) {}

  static IntersectionIndex of(std::initializer_list<std::size_t> members);
  static IntersectionIndex full(std::size_t m);

  constexpr std::uint32_t bits() const noexcept { return bits_; }
  constexpr bool contains(std::size_t i) const noexcept {
    return ((bits_ >> i) & 1U) != 0U;
  }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool is_proper_subset_of(IntersectionIndex other) const noexcept {
    return bits_ != other.bits_ && (bits_ & ~other.bits_) == 0U;
  }
  std::vector<std::size_t> members() const;

  friend constexpr bool operator==(IntersectionIndex, IntersectionIndex) = default;

 private:
  std::uint32_t bits_;
};

using LocalTest = bool (*)(const TestingProblem&, IntersectionIndex);

/// Rejects H_I iff the smallest p in I (ties: smallest index) is at most
/// its weight share of alpha within I.
bool wap_local_test(const TestingProblem& problem, IntersectionIndex I);

/// Weighted Bonferroni: rejects H_I iff some p_i <= (w_i / sum_I w) * alpha.
bool whp_local_test(const TestingProblem& problem, IntersectionIndex I);

LocalTest local_test_for(Procedure procedure);

struct CtpReport {
  std::size_t m = 0;
  /// Indexed by bitmask; entry 0 is unused.
  std::vector<std::uint8_t> local_decisions;
  RejectionSet elementary_rejections;

  bool local_decision(IntersectionIndex I) const {
    return local_decisions[I.bits()] != 0;
  }
};

/// Evaluates the local test on all 2^m - 1 intersections; H_i is rejected
/// iff every intersection containing i is locally rejected. m <= 20.
CtpReport ctp(const TestingProblem& problem, LocalTest local_test);

struct ConsonanceReport {
  bool holds = true;
  std::optional<IntersectionIndex> violation;
};

/// Every intersection the closed procedure rejects must contain a rejected
/// elementary hypothesis.
ConsonanceReport check_consonance(const TestingProblem& problem,
                                  LocalTest local_test);

/// alpha_i(I), the critical value hypothesis i faces inside intersection I.
/// WHP: (w_i / sum_I w) * alpha. WAP: the common value c(I) = (w_k / sum_I w)
/// * alpha with k the smallest-p member; WAP rejects H_I iff some member
/// has p_i <= c(I).
double critical_share(const TestingProblem& problem, Procedure procedure,
                      IntersectionIndex I, std::size_t i);

struct MonotonicityWitness {
  IntersectionIndex larger{0};   // I
  IntersectionIndex smaller{0};  // J, a proper subset of I
  std::size_t hypothesis = 0;    // i in J
  double level_in_larger = 0.0;  // alpha_i(I)
  double level_in_smaller = 0.0; // alpha_i(J) < alpha_i(I)
};

struct MonotonicityReport {
  bool holds = true;
  std::optional<MonotonicityWitness> counterexample;
};

/// Checks alpha_i(I) <= alpha_i(J) for all i in J, J a proper subset of I.
/// Returns the first violation in ascending-I order. m <= 12.
MonotonicityReport check_monotonicity_condition(const TestingProblem& problem,
                                                Procedure procedure);

struct PValueMonotonicityViolation {
  TestingProblem original;
  TestingProblem lowered;  // componentwise <= original
  std::size_t rejections_original = 0;
  std::size_t rejections_lowered = 0;  // strictly fewer
  std::size_t trial = 0;
};

/// Search space for the randomized p-value monotonicity search.
struct MonotonicitySearch {
  std::size_t min_m = 3;
  std::size_t max_m = 5;
  double max_weight_ratio = 10.0;  // weights ~ U[1, ratio]
  double p_max = 0.1;              // p ~ U[0, p_max]
  double alpha = 0.05;
};

/// Draws (p, q) pairs with q <= p componentwise and returns the first pair
/// where lowering p-values to q loses rejections.
std::optional<PValueMonotonicityViolation> find_pvalue_monotonicity_violation(
    Procedure procedure, std::size_t trials, std::uint64_t seed,
    const MonotonicitySearch& search = {});

}  // namespace wholm
