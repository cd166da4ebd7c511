#pragma once

// Domain types shared by every module: the validated testing problem,
// weighted p-values, deterministic orderings and rejection sets.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wholm {

/// Which step-down rule a routine refers to. Holm is the unweighted baseline.
enum class Procedure { Holm, Whp, Wap };

std::string_view procedure_name(Procedure procedure);

/// Validated bundle of hypothesis labels, raw p-values, positive weights
/// and the global level. Immutable once built.
class TestingProblem {
 public:
  /// Throws ValidationError naming the offending index on any violation:
  /// length mismatch, empty family, p outside [0,1], weight not positive
  /// and finite, alpha outside (0,1).
  static TestingProblem validate(std::vector<std::string> labels,
                                 std::vector<double> p,
                                 std::vector<double> w, double alpha);

  /// Same as validate() with labels H1..Hm.
  static TestingProblem from_values(std::vector<double> p,
                                    std::vector<double> w, double alpha);

  std::size_t size() const noexcept { return p_.size(); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::span<const double> p() const noexcept { return p_; }
  std::span<const double> w() const noexcept { return w_; }
  double alpha() const noexcept { return alpha_; }

  TestingProblem with_alpha(double alpha) const;
  TestingProblem with_pvalues(std::vector<double> p) const;

 private:
  TestingProblem(std::vector<std::string> labels, std::vector<double> p,
                 std::vector<double> w, double alpha);

  std::vector<std::string> labels_;
  std::vector<double> p_;
  std::vector<double> w_;
  double alpha_;
};

/// p_i / w_i, aligned with the problem's hypothesis order.
struct WeightedPValues {
  std::vector<double> values;
};

WeightedPValues weighted_pvalues(const TestingProblem& problem);

enum class OrderKey { Raw, Weighted };

/// perm[rank] = original index. Keyed values are nondecreasing along perm;
/// equal values keep increasing original-index order.
struct OrderingPermutation {
  std::vector<std::size_t> perm;
  OrderKey key = OrderKey::Raw;

  /// rank_of()[i] is the rank of original index i.
  std::vector<std::size_t> rank_of() const;
};

OrderingPermutation order(std::span<const double> values, OrderKey key);

/// The two orderings a problem induces.
OrderingPermutation raw_order(const TestingProblem& problem);
OrderingPermutation weighted_order(const TestingProblem& problem);

struct RejectionStep {
  std::size_t step = 0;   // 1-based
  std::size_t index = 0;  // original hypothesis index
  double threshold = 0.0; // raw p-value scale
};

/// Rejected hypotheses plus the order in which they were rejected.
class RejectionSet {
 public:
  /// Appends a rejection. Throws InvariantError on a repeated index or a
  /// threshold outside (0, 1].
  void record(std::size_t index, double threshold);

  /// Sorted ascending.
  const std::vector<std::size_t>& rejected() const noexcept { return rejected_; }
  const std::vector<RejectionStep>& trace() const noexcept { return trace_; }

  std::size_t size() const noexcept { return rejected_.size(); }
  bool empty() const noexcept { return rejected_.empty(); }
  bool contains(std::size_t index) const;
  bool is_subset_of(const RejectionSet& other) const;

  /// Compares rejected sets only; traces may legitimately differ.
  bool same_rejections(const RejectionSet& other) const {
    return rejected_ == other.rejected_;
  }

 private:
  std::vector<std::size_t> rejected_;
  std::vector<RejectionStep> trace_;
};

/// Reads the `hypothesis,p_value,weight` CSV. Row order becomes hypothesis
/// order. Schema problems raise ValidationError with a 1-based line number
/// in the message.
TestingProblem read_problem_csv(std::istream& in, double alpha);

}  // namespace wholm
