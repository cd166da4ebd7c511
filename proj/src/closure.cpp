#include "wholm/closure.hpp"

#include <string>

#include "wholm/error.hpp"
#include "wholm/procedures.hpp"
#include "wholm/rng.hpp"

namespace wholm {

IntersectionIndex IntersectionIndex::of(std::initializer_list<std::size_t> members) {
  std::uint32_t bits = 0;
  for (std::size_t i : members) {
    if (i >= kMaxCtpHypotheses) throw UsageError("intersection member out of range");
    bits |= 1U << i;
  }
  return IntersectionIndex(bits);
}

IntersectionIndex IntersectionIndex::full(std::size_t m) {
  if (m == 0 || m > kMaxCtpHypotheses) throw UsageError("intersection size out of range");
  return IntersectionIndex(static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1));
}

std::vector<std::size_t> IntersectionIndex::members() const {
  std::vector<std::size_t> out;
  for (std::uint32_t rest = bits_; rest != 0U; rest &= rest - 1U) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

namespace {

void check_intersection(const TestingProblem& problem, IntersectionIndex I) {
  if (I.bits() == 0U) throw UsageError("empty intersection");
  const std::size_t m = problem.size();
  if (m < 32 && (I.bits() >> m) != 0U) {
    throw UsageError("intersection refers to hypotheses beyond m");
  }
}

struct IntersectionSummary {
  double weight_sum = 0.0;
  std::size_t smallest = 0;  // index of min p, ties to the smallest index
};

// Members visited in ascending index order, so sums of nested sets round
// monotonically.
IntersectionSummary summarize(const TestingProblem& problem, IntersectionIndex I) {
  IntersectionSummary s;
  bool first = true;
  for (std::uint32_t rest = I.bits(); rest != 0U; rest &= rest - 1U) {
    const auto i = static_cast<std::size_t>(std::countr_zero(rest));
    s.weight_sum += problem.w()[i];
    if (first || problem.p()[i] < problem.p()[s.smallest]) s.smallest = i;
    first = false;
  }
  return s;
}

void check_capacity(std::size_t m, std::size_t cap, const char* what) {
  if (m > cap) {
    throw CapacityError(std::string(what) + ": m = " + std::to_string(m) +
                        " exceeds the cap of " + std::to_string(cap) +
                        " hypotheses");
  }
}

std::vector<std::uint8_t> local_table(const TestingProblem& problem,
                                      LocalTest local_test) {
  const std::size_t count = std::size_t{1} << problem.size();
  std::vector<std::uint8_t> table(count, 0);
  for (std::size_t bits = 1; bits < count; ++bits) {
    table[bits] = local_test(problem, IntersectionIndex(static_cast<std::uint32_t>(bits))) ? 1 : 0;
  }
  return table;
}

}  // namespace

bool wap_local_test(const TestingProblem& problem, IntersectionIndex I) {
  check_intersection(problem, I);
  const auto s = summarize(problem, I);
  return problem.p()[s.smallest] <=
         (problem.w()[s.smallest] / s.weight_sum) * problem.alpha();
}

bool whp_local_test(const TestingProblem& problem, IntersectionIndex I) {
  check_intersection(problem, I);
  const auto s = summarize(problem, I);
  for (std::uint32_t rest = I.bits(); rest != 0U; rest &= rest - 1U) {
    const auto i = static_cast<std::size_t>(std::countr_zero(rest));
    if (problem.p()[i] <= (problem.w()[i] / s.weight_sum) * problem.alpha()) {
      return true;
    }
  }
  return false;
}

LocalTest local_test_for(Procedure procedure) {
  switch (procedure) {
    case Procedure::Whp: return &whp_local_test;
    case Procedure::Wap: return &wap_local_test;
    case Procedure::Holm: break;
  }
  throw UsageError("no weighted local test for the unweighted Holm procedure");
}

CtpReport ctp(const TestingProblem& problem, LocalTest local_test) {
  const std::size_t m = problem.size();
  check_capacity(m, kMaxCtpHypotheses, "ctp");

  CtpReport report;
  report.m = m;
  report.local_decisions = local_table(problem, local_test);
  const std::size_t count = report.local_decisions.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    bool all = true;
    for (std::size_t bits = bit; bits < count && all; ++bits) {
      if ((bits & bit) != 0 && report.local_decisions[bits] == 0) all = false;
    }
    if (all) report.elementary_rejections.record(i, problem.alpha());
  }
  return report;
}

ConsonanceReport check_consonance(const TestingProblem& problem,
                                  LocalTest local_test) {
  const std::size_t m = problem.size();
  check_capacity(m, kMaxCtpHypotheses, "check_consonance");

  // closed[S] = local[S] and closed[T] for every superset T of S.
  auto closed = local_table(problem, local_test);
  const std::size_t count = closed.size();
  for (std::size_t bits = count - 1; bits >= 1; --bits) {
    if (closed[bits] == 0) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      if ((bits & bit) == 0 && closed[bits | bit] == 0) {
        closed[bits] = 0;
        break;
      }
    }
  }

  ConsonanceReport report;
  for (std::size_t bits = 1; bits < count; ++bits) {
    if (closed[bits] == 0) continue;
    bool has_elementary = false;
    for (std::size_t i = 0; i < m && !has_elementary; ++i) {
      const std::size_t bit = std::size_t{1} << i;
      has_elementary = (bits & bit) != 0 && closed[bit] != 0;
    }
    if (!has_elementary) {
      report.holds = false;
      report.violation = IntersectionIndex(static_cast<std::uint32_t>(bits));
      return report;
    }
  }
  return report;
}

double critical_share(const TestingProblem& problem, Procedure procedure,
                      IntersectionIndex I, std::size_t i) {
  check_intersection(problem, I);
  if (!I.contains(i)) throw UsageError("hypothesis is not a member of the intersection");
  const auto s = summarize(problem, I);
  switch (procedure) {
    case Procedure::Whp:
      return (problem.w()[i] / s.weight_sum) * problem.alpha();
    case Procedure::Wap:
      return (problem.w()[s.smallest] / s.weight_sum) * problem.alpha();
    case Procedure::Holm:
      break;
  }
  throw UsageError("critical_share: procedure must be WHP or WAP");
}

MonotonicityReport check_monotonicity_condition(const TestingProblem& problem,
                                                Procedure procedure) {
  const std::size_t m = problem.size();
  check_capacity(m, kMaxMonotonicityHypotheses, "check_monotonicity_condition");
  if (procedure == Procedure::Holm) {
    throw UsageError("check_monotonicity_condition: procedure must be WHP or WAP");
  }

  // Every share alpha_i(I), flattened as [bits * m + i].
  const std::size_t count = std::size_t{1} << m;
  std::vector<double> share(count * m, 0.0);
  for (std::size_t bits = 1; bits < count; ++bits) {
    const IntersectionIndex I(static_cast<std::uint32_t>(bits));
    for (std::size_t i = 0; i < m; ++i) {
      if (I.contains(i)) share[bits * m + i] = critical_share(problem, procedure, I, i);
    }
  }

  MonotonicityReport report;
  for (std::size_t outer = 1; outer < count; ++outer) {
    for (std::size_t inner = (outer - 1) & outer; inner != 0; inner = (inner - 1) & outer) {
      for (std::size_t i = 0; i < m; ++i) {
        if (((inner >> i) & 1U) == 0) continue;
        const double big = share[outer * m + i];
        const double small = share[inner * m + i];
        if (big > small) {
          report.holds = false;
          report.counterexample = MonotonicityWitness{
              IntersectionIndex(static_cast<std::uint32_t>(outer)),
              IntersectionIndex(static_cast<std::uint32_t>(inner)), i, big, small};
          return report;
        }
      }
    }
  }
  return report;
}

std::optional<PValueMonotonicityViolation> find_pvalue_monotonicity_violation(
    Procedure procedure, std::size_t trials, std::uint64_t seed,
    const MonotonicitySearch& search) {
  if (search.min_m < 1 || search.max_m < search.min_m) {
    throw ValidationError("monotonicity search: invalid range of m");
  }
  if (!(search.max_weight_ratio >= 1.0)) {
    throw ValidationError("monotonicity search: weight ratio must be >= 1");
  }
  Rng gen(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t m = search.min_m + gen.index(search.max_m - search.min_m + 1);
    std::vector<double> p(m);
    std::vector<double> w(m);
    std::vector<double> q(m);
    for (std::size_t i = 0; i < m; ++i) {
      p[i] = gen.uniform(0.0, search.p_max);
      w[i] = gen.uniform(1.0, search.max_weight_ratio);
    }
    for (std::size_t i = 0; i < m; ++i) {
      q[i] = gen.uniform() < 0.5 ? gen.uniform(0.0, p[i]) : p[i];
    }
    auto original = TestingProblem::from_values(p, w, search.alpha);
    auto lowered = original.with_pvalues(q);
    const std::size_t before = run_procedure(procedure, original).size();
    const std::size_t after = run_procedure(procedure, lowered).size();
    if (after < before) {
      return PValueMonotonicityViolation{std::move(original), std::move(lowered),
                                         before, after, trial};
    }
  }
  return std::nullopt;
}

}  // namespace wholm
