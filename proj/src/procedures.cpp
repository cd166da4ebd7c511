#include "wholm/procedures.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <string>

#include "wholm/error.hpp"

namespace wholm {

namespace {

// Exact running sum as nonoverlapping partials (smallest first), rounded
// once on read, as in Python's math.fsum. Equal sets of weights give equal
// sums whatever order they arrive in.
class ExactSum {
 public:
  void add(double x) {
    std::size_t n = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[n++] = lo;
      x = hi;
    }
    partials_.resize(n);
    partials_.push_back(x);
  }

  double value() const {
    std::size_t n = partials_.size();
    if (n == 0) return 0.0;
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      lo = y - (hi - x);
      if (lo != 0.0) break;
    }
    // Half-way case: look at the next partial to break the tie.
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

}  // namespace

std::vector<double> tail_weight_sums(std::span<const double> w,
                                     std::span<const std::size_t> perm) {
  std::vector<double> tails(perm.size());
  ExactSum acc;
  for (std::size_t r = perm.size(); r-- > 0;) {
    acc.add(w[perm[r]]);
    tails[r] = acc.value();
  }
  return tails;
}

RejectionSet whp_stepdown(const TestingProblem& problem) {
  const auto weighted = weighted_pvalues(problem).values;
  const auto ord = order(weighted, OrderKey::Weighted);
  const auto tails = tail_weight_sums(problem.w(), ord.perm);
  const double alpha = problem.alpha();

  RejectionSet out;
  for (std::size_t r = 0; r < ord.perm.size(); ++r) {
    const std::size_t i = ord.perm[r];
    const double critical = alpha / tails[r];
    if (!(weighted[i] <= critical)) break;
    out.record(i, problem.w()[i] * critical);
  }
  return out;
}

RejectionSet wap_stepdown(const TestingProblem& problem) {
  const auto ord = order(problem.p(), OrderKey::Raw);
  const auto tails = tail_weight_sums(problem.w(), ord.perm);
  const double alpha = problem.alpha();

  RejectionSet out;
  for (std::size_t r = 0; r < ord.perm.size(); ++r) {
    const std::size_t i = ord.perm[r];
    const double threshold = (problem.w()[i] / tails[r]) * alpha;
    if (!(problem.p()[i] <= threshold)) break;
    out.record(i, threshold);
  }
  return out;
}

RejectionSet holm_stepdown(std::span<const double> p, double alpha) {
  if (p.empty()) throw ValidationError("holm_stepdown: no p-values");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw ValidationError("p-value at index " + std::to_string(i) +
                                " is outside [0,1]",
                            i);
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0,1)");
  }
  const auto ord = order(p, OrderKey::Raw);
  const std::size_t m = p.size();

  RejectionSet out;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = ord.perm[r];
    const double threshold = alpha / static_cast<double>(m - r);
    if (!(p[i] <= threshold)) break;
    out.record(i, threshold);
  }
  return out;
}

RejectionSet weighted_stepdown(const TestingProblem& problem,
                               std::span<const double> critical_values) {
  if (critical_values.size() != problem.size()) {
    throw ValidationError("weighted_stepdown: need one critical value per hypothesis");
  }
  for (std::size_t r = 0; r < critical_values.size(); ++r) {
    if (!(critical_values[r] > 0.0) ||
        (r > 0 && critical_values[r] < critical_values[r - 1])) {
      throw ValidationError(
          "weighted_stepdown: critical values must be positive and nondecreasing",
          r);
    }
  }
  const auto weighted = weighted_pvalues(problem).values;
  const auto ord = order(weighted, OrderKey::Weighted);

  RejectionSet out;
  for (std::size_t r = 0; r < ord.perm.size(); ++r) {
    const std::size_t i = ord.perm[r];
    if (!(weighted[i] <= critical_values[r])) break;
    out.record(i, std::min(problem.w()[i] * critical_values[r], 1.0));
  }
  return out;
}

RejectionSet run_procedure(Procedure procedure, const TestingProblem& problem) {
  switch (procedure) {
    case Procedure::Holm: return holm_stepdown(problem.p(), problem.alpha());
    case Procedure::Whp: return whp_stepdown(problem);
    case Procedure::Wap: return wap_stepdown(problem);
  }
  throw UsageError("unknown procedure");
}

}  // namespace wholm
