#include "wholm/graphical.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>

#include "wholm/error.hpp"

namespace wholm {

namespace {

// Slack for row sums that are 1 in exact arithmetic.
constexpr double kRowSumSlack = 64 * std::numeric_limits<double>::epsilon();

// Double-double arithmetic built from error-free transforms.
struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DD two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  const DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

DD operator-(DD a, DD b) { return a + DD{-b.hi, -b.lo}; }

DD operator*(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

DD operator/(DD a, DD b) {
  const double q1 = a.hi / b.hi;
  DD r = a - b * DD{q1, 0.0};
  const double q2 = r.hi / b.hi;
  r = r - b * DD{q2, 0.0};
  const double q3 = r.hi / b.hi;
  return quick_two_sum(q1, q2) + DD{q3, 0.0};
}

}  // namespace

TransitionGraph::TransitionGraph(std::vector<double> local_alpha,
                                 std::vector<double> transitions)
    : active_(local_alpha.size(), 1),
      local_alpha_(std::move(local_alpha)),
      local_alpha_lo_(local_alpha_.size(), 0.0),
      g_(std::move(transitions)),
      g_lo_(g_.size(), 0.0) {
  const std::size_t m = local_alpha_.size();
  if (m == 0) throw ValidationError("graph has no nodes");
  if (g_.size() != m * m) throw ValidationError("transition matrix must be m x m");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(local_alpha_[i] >= 0.0 && std::isfinite(local_alpha_[i]))) {
      throw ValidationError("local level must be nonnegative and finite", i);
    }
    g_[i * m + i] = 0.0;
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double g = g_[i * m + j];
      if (!(g >= 0.0 && g <= 1.0)) {
        throw ValidationError("transition coefficient outside [0,1]", i);
      }
      row += g;
    }
    if (row > 1.0 + kRowSumSlack) {
      throw ValidationError("transition row sums to more than 1", i);
    }
  }
}

std::size_t TransitionGraph::active_count() const noexcept {
  std::size_t n = 0;
  for (auto a : active_) n += a;
  return n;
}

std::vector<std::size_t> TransitionGraph::active_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i] != 0) out.push_back(i);
  }
  return out;
}

double TransitionGraph::transition(std::size_t i, std::size_t j) const {
  const std::size_t m = size();
  if (i >= m || j >= m) throw UsageError("node index out of range");
  return g_[i * m + j];
}

double TransitionGraph::total_alpha() const noexcept {
  double total = 0.0;
  for (std::size_t i = 0; i < local_alpha_.size(); ++i) {
    if (active_[i] != 0) total += local_alpha_[i];
  }
  return total;
}

TransitionGraph initial_graph(std::span<const double> w, double alpha) {
  const std::size_t m = w.size();
  if (m == 0) throw ValidationError("initial_graph: no weights");
  DD total;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(w[i] > 0.0 && std::isfinite(w[i]))) {
      throw ValidationError("initial_graph: weights must be positive and finite", i);
    }
    total = total + DD{w[i], 0.0};
  }
  TransitionGraph graph;
  graph.active_.assign(m, 1);
  graph.local_alpha_.assign(m, 0.0);
  graph.local_alpha_lo_.assign(m, 0.0);
  graph.g_.assign(m * m, 0.0);
  graph.g_lo_.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const DD level = two_prod(w[i], alpha) / total;
    graph.local_alpha_[i] = level.hi;
    graph.local_alpha_lo_[i] = level.lo;
    const DD others = total - DD{w[i], 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const DD g = DD{w[j], 0.0} / others;
      graph.g_[i * m + j] = g.hi;
      graph.g_lo_[i * m + j] = g.lo;
    }
  }
  return graph;
}

TransitionGraph reject_and_update(const TransitionGraph& graph, std::size_t j) {
  const std::size_t m = graph.size();
  if (j >= m || graph.active_[j] == 0) {
    throw UsageError("reject_and_update: node " + std::to_string(j) + " is not active");
  }
  TransitionGraph next = graph;
  auto g = [&](std::size_t a, std::size_t b) {
    return DD{graph.g_[a * m + b], graph.g_lo_[a * m + b]};
  };
  const DD level_j{graph.local_alpha_[j], graph.local_alpha_lo_[j]};

  for (std::size_t l = 0; l < m; ++l) {
    if (l == j || graph.active_[l] == 0) continue;
    const DD level =
        DD{graph.local_alpha_[l], graph.local_alpha_lo_[l]} + level_j * g(j, l);
    next.local_alpha_[l] = level.hi;
    next.local_alpha_lo_[l] = level.lo;
    const DD denom = DD{1.0, 0.0} - g(l, j) * g(j, l);
    for (std::size_t k = 0; k < m; ++k) {
      if (k == l || k == j || graph.active_[k] == 0) continue;
      if (!(denom.hi > 0.0)) {
        throw InvariantError("reject_and_update: g_lj * g_jl = 1 for l = " +
                             std::to_string(l) + ", j = " + std::to_string(j));
      }
      const DD v = (g(l, k) + g(l, j) * g(j, k)) / denom;
      next.g_[l * m + k] = v.hi;
      next.g_lo_[l * m + k] = v.lo;
    }
  }
  next.active_[j] = 0;
  next.local_alpha_[j] = 0.0;
  next.local_alpha_lo_[j] = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    next.g_[j * m + k] = next.g_lo_[j * m + k] = 0.0;
    next.g_[k * m + j] = next.g_lo_[k * m + j] = 0.0;
  }
  return next;
}

GraphicalRun run_graphical(const TestingProblem& problem, OrderKey ordering) {
  const auto weighted = weighted_pvalues(problem).values;
  const std::span<const double> key =
      ordering == OrderKey::Weighted ? std::span<const double>(weighted) : problem.p();

  GraphicalRun run;
  TransitionGraph graph = initial_graph(problem.w(), problem.alpha());
  while (graph.active_count() > 0) {
    std::size_t j = problem.size();
    for (std::size_t i = 0; i < problem.size(); ++i) {
      if (graph.is_active(i) && (j == problem.size() || key[i] < key[j])) j = i;
    }
    const double level = graph.local_alpha(j);
    if (!(problem.p()[j] <= level)) break;
    run.rejections.record(j, level);
    TransitionGraph next = reject_and_update(graph, j);
    run.trace.push_back(GraphStage{j, graph, next});
    graph = std::move(next);
  }
  return run;
}

std::string format_coefficient(double value) {
  constexpr std::int64_t kMaxDenominator = 1'000'000;
  constexpr double kTolerance = 1e-13;
  if (value == std::floor(value) && std::fabs(value) < 1e15) {
    std::ostringstream out;
    out << static_cast<std::int64_t>(value);
    return out.str();
  }
  // Continued-fraction convergents h/k of value.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(value));
  std::int64_t k_prev = 0, k = 1;
  double rest = value - std::floor(value);
  while (rest > 0.0) {
    if (std::fabs(value - static_cast<double>(h) / static_cast<double>(k)) <= kTolerance) {
      break;
    }
    const double inv = 1.0 / rest;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    rest = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > kMaxDenominator) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  std::ostringstream out;
  if (k <= kMaxDenominator &&
      std::fabs(value - static_cast<double>(h) / static_cast<double>(k)) <= kTolerance) {
    out << h;
    if (k != 1) out << '/' << k;
  } else {
    out << std::fixed << std::setprecision(6) << value;
  }
  return out.str();
}

namespace {

std::string dot_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string stage_dot(std::size_t stage, const TransitionGraph& graph,
                      const std::vector<std::uint8_t>& rejected,
                      std::span<const std::string> labels) {
  std::ostringstream out;
  out << "digraph stage_" << stage << " {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle, style=filled];\n";
  for (std::size_t i = 0; i < graph.size(); ++i) {
    out << "  n" << i << " [label=\"" << dot_escape(labels[i]);
    if (rejected[i] != 0) {
      out << "\", rejected=true, fillcolor=yellow];\n";
    } else {
      out << "\\n" << std::fixed << std::setprecision(4) << graph.local_alpha(i)
          << "\", fillcolor=red];\n";
    }
  }
  for (std::size_t i : graph.active_indices()) {
    for (std::size_t j : graph.active_indices()) {
      const double g = graph.transition(i, j);
      if (i == j || g == 0.0) continue;
      out << "  n" << i << " -> n" << j << " [label=\"" << format_coefficient(g)
          << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::vector<std::string> export_dot(const GraphTrace& trace,
                                    const TransitionGraph& initial,
                                    std::span<const std::string> labels) {
  if (labels.size() != initial.size()) {
    throw UsageError("export_dot: need one label per node");
  }
  std::vector<std::uint8_t> rejected(initial.size(), 0);
  std::vector<std::string> out;
  out.push_back(stage_dot(0, initial, rejected, labels));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace[k].rejected >= rejected.size() || rejected[trace[k].rejected] != 0) {
      throw UsageError("export_dot: trace rejects an invalid or repeated node");
    }
    rejected[trace[k].rejected] = 1;
    out.push_back(stage_dot(k + 1, trace[k].after, rejected, labels));
  }
  return out;
}

}  // namespace wholm
