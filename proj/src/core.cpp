#include "wholm/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>

#include "wholm/error.hpp"
#include "wholm/kernels.hpp"

namespace wholm {

std::string_view procedure_name(Procedure procedure) {
  switch (procedure) {
    case Procedure::Holm: return "HOLM";
    case Procedure::Whp: return "WHP";
    case Procedure::Wap: return "WAP";
  }
  return "UNKNOWN";
}

TestingProblem::TestingProblem(std::vector<std::string> labels,
                               std::vector<double> p, std::vector<double> w,
                               double alpha)
    : labels_(std::move(labels)),
      p_(std::move(p)),
      w_(std::move(w)),
      alpha_(alpha) {}

TestingProblem TestingProblem::validate(std::vector<std::string> labels,
                                        std::vector<double> p,
                                        std::vector<double> w, double alpha) {
  if (p.empty()) throw ValidationError("problem has no hypotheses");
  if (labels.size() != p.size() || w.size() != p.size()) {
    std::ostringstream msg;
    msg << "length mismatch: " << labels.size() << " labels, " << p.size()
        << " p-values, " << w.size() << " weights";
    throw ValidationError(msg.str(), std::min({labels.size(), p.size(), w.size()}));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    // Written so that NaN fails.
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "p-value at index " << i << " is outside [0,1]: " << p[i];
      throw ValidationError(msg.str(), i);
    }
    if (!(w[i] > 0.0 && std::isfinite(w[i]))) {
      std::ostringstream msg;
      msg << "weight at index " << i << " must be positive and finite: " << w[i];
      throw ValidationError(msg.str(), i);
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0,1): " << alpha;
    throw ValidationError(msg.str());
  }
  return TestingProblem(std::move(labels), std::move(p), std::move(w), alpha);
}

TestingProblem TestingProblem::from_values(std::vector<double> p,
                                           std::vector<double> w, double alpha) {
  std::vector<std::string> labels(p.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = "H" + std::to_string(i + 1);
  }
  return validate(std::move(labels), std::move(p), std::move(w), alpha);
}

TestingProblem TestingProblem::with_alpha(double alpha) const {
  return validate(labels_, p_, w_, alpha);
}

TestingProblem TestingProblem::with_pvalues(std::vector<double> p) const {
  return validate(labels_, std::move(p), w_, alpha_);
}

WeightedPValues weighted_pvalues(const TestingProblem& problem) {
  WeightedPValues out;
  out.values.resize(problem.size());
  kernels::divide(problem.p(), problem.w(), out.values);
  return out;
}

std::vector<std::size_t> OrderingPermutation::rank_of() const {
  std::vector<std::size_t> rank(perm.size());
  for (std::size_t r = 0; r < perm.size(); ++r) rank[perm[r]] = r;
  return rank;
}

OrderingPermutation order(std::span<const double> values, OrderKey key) {
  OrderingPermutation out;
  out.key = key;
  out.perm.resize(values.size());
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return out;
}

OrderingPermutation raw_order(const TestingProblem& problem) {
  return order(problem.p(), OrderKey::Raw);
}

OrderingPermutation weighted_order(const TestingProblem& problem) {
  return order(weighted_pvalues(problem).values, OrderKey::Weighted);
}

void RejectionSet::record(std::size_t index, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    std::ostringstream msg;
    msg << "rejection threshold outside (0,1]: " << threshold;
    throw InvariantError(msg.str());
  }
  const auto it = std::lower_bound(rejected_.begin(), rejected_.end(), index);
  if (it != rejected_.end() && *it == index) {
    throw InvariantError("hypothesis " + std::to_string(index) +
                         " rejected twice");
  }
  rejected_.insert(it, index);
  trace_.push_back({trace_.size() + 1, index, threshold});
}

bool RejectionSet::contains(std::size_t index) const {
  return std::binary_search(rejected_.begin(), rejected_.end(), index);
}

bool RejectionSet::is_subset_of(const RejectionSet& other) const {
  return std::includes(other.rejected_.begin(), other.rejected_.end(),
                       rejected_.begin(), rejected_.end());
}

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view text, std::size_t line_no,
                    std::string_view column) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    std::ostringstream msg;
    msg << "line " << line_no << ", column '" << column
        << "': not a number: '" << text << "'";
    throw ValidationError(msg.str(), line_no);
  }
  return value;
}

}  // namespace

TestingProblem read_problem_csv(std::istream& in, double alpha) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::string> labels;
  std::vector<double> p;
  std::vector<double> w;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split_fields(view);
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "hypothesis" ||
          fields[1] != "p_value" || fields[2] != "weight") {
        throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected header 'hypothesis,p_value,weight'",
                              line_no);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != 3) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                std::to_string(fields.size()),
                            line_no);
    }
    if (fields[0].empty()) {
      throw ValidationError("line " + std::to_string(line_no) +
                                ", column 'hypothesis': empty label",
                            line_no);
    }
    labels.emplace_back(fields[0]);
    p.push_back(parse_number(fields[1], line_no, "p_value"));
    w.push_back(parse_number(fields[2], line_no, "weight"));
  }
  if (!have_header) throw ValidationError("empty input: missing header");
  if (labels.empty()) throw ValidationError("no hypothesis rows after header");
  return TestingProblem::validate(std::move(labels), std::move(p), std::move(w),
                                  alpha);
}

}  // namespace wholm
