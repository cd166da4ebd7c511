#pragma once

// Graphical form of the weighted Holm procedures: local levels plus a
// transition matrix that passes a rejected node's level to the survivors.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wholm/core.hpp"

namespace wholm {

/// Local levels and transition coefficients over the active nodes.
/// Inactive nodes have level 0 and no edges. Value type: copies are deep.
class TransitionGraph {
 public:
  /// `transitions` is row-major m x m; the diagonal is ignored. Throws
  /// ValidationError unless levels are nonnegative and finite, coefficients
  /// lie in [0,1] and each row sums to at most 1 (up to rounding).
  TransitionGraph(std::vector<double> local_alpha, std::vector<double> transitions);

  std::size_t size() const noexcept { return local_alpha_.size(); }
  bool is_active(std::size_t i) const { return active_.at(i) != 0; }
  std::size_t active_count() const noexcept;
  std::vector<std::size_t> active_indices() const;

  double local_alpha(std::size_t i) const { return local_alpha_.at(i); }
  /// g_ij; 0 when i == j or either node is inactive.
  double transition(std::size_t i, std::size_t j) const;

  double total_alpha() const noexcept;

 private:
  TransitionGraph() = default;
  friend TransitionGraph reject_and_update(const TransitionGraph&, std::size_t);
  friend TransitionGraph initial_graph(std::span<const double>, double);

  // Values are kept as double-double (hi + lo) so that long chains of
  // updates stay within a few ulps; accessors return hi.
  std::vector<std::uint8_t> active_;
  std::vector<double> local_alpha_;
  std::vector<double> local_alpha_lo_;
  std::vector<double> g_;
  std::vector<double> g_lo_;
};

/// alpha_i = w_i alpha / sum w and g_ij = w_j / sum_{k != i} w_k.
TransitionGraph initial_graph(std::span<const double> w, double alpha);

/// Removes node j and redistributes its level:
///   alpha_l += alpha_j g_jl
///   g_lk = (g_lk + g_lj g_jk) / (1 - g_lj g_jl)
/// Throws UsageError if j is inactive and InvariantError if a denominator
/// vanishes.
TransitionGraph reject_and_update(const TransitionGraph& graph, std::size_t j);

struct GraphStage {
  std::size_t rejected = 0;
  TransitionGraph before;
  TransitionGraph after;
};

using GraphTrace = std::vector<GraphStage>;

struct GraphicalRun {
  RejectionSet rejections;
  GraphTrace trace;
};

/// Weighted ordering selects argmin p_i / w_i (the WHP variant); raw
/// ordering selects argmin p_i (WAP). Ties go to the smallest index. The
/// selected node is rejected iff p_j <= alpha_j.
GraphicalRun run_graphical(const TestingProblem& problem, OrderKey ordering);

/// One DOT digraph per stage: the initial graph, then the graph after each
/// rejection. Node labels carry the hypothesis id and level to 4 decimals;
/// edge labels are reduced fractions when the denominator is at most 10^6.
std::vector<std::string> export_dot(const GraphTrace& trace,
                                    const TransitionGraph& initial,
                                    std::span<const std::string> labels);

/// "2/5", "1", or a 6-decimal float when no fraction with denominator
/// <= 10^6 matches.
std::string format_coefficient(double value);

}  // namespace wholm
