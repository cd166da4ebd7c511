#include "wholm/montecarlo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "parallel.hpp"
#include "wholm/error.hpp"
#include "wholm/kernels.hpp"
#include "wholm/procedures.hpp"

namespace wholm {

std::string_view scenario_name(WeightScenario scenario) {
  switch (scenario) {
    case WeightScenario::S1: return "S1";
    case WeightScenario::S2: return "S2";
    case WeightScenario::S3: return "S3";
    case WeightScenario::S4: return "S4";
  }
  return "?";
}

std::optional<WeightScenario> parse_scenario(std::string_view text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (t.size() == 2 && t[0] == 'S') t.erase(0, 1);
  if (t == "1") return WeightScenario::S1;
  if (t == "2") return WeightScenario::S2;
  if (t == "3") return WeightScenario::S3;
  if (t == "4") return WeightScenario::S4;
  return std::nullopt;
}

std::vector<double> weight_scenario(WeightScenario scenario, const NullMask& nulls,
                                    Rng& gen) {
  double alt_lo = 0.0;
  double alt_hi = 0.0;
  switch (scenario) {
    case WeightScenario::S1: alt_lo = 6.0; alt_hi = 10.0; break;
    case WeightScenario::S2: alt_lo = 2.0; alt_hi = 10.0; break;
    case WeightScenario::S3: alt_lo = 2.0; alt_hi = 6.0; break;
    case WeightScenario::S4: break;
  }
  std::vector<double> w(nulls.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (scenario == WeightScenario::S4) {
      w[i] = gen.uniform(1.0, 6.0);
    } else {
      w[i] = nulls[i] ? gen.uniform(1.0, 2.0) : gen.uniform(alt_lo, alt_hi);
    }
  }
  return w;
}

std::vector<double> DataMatrix::column(std::size_t c) const {
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

DataMatrix sample_equicorrelated(std::size_t m, double rho, std::span<const double> mu,
                                 std::size_t n, Rng& gen) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw ValidationError("equicorrelation rho must lie in [0,1)");
  }
  if (mu.size() != m) throw ValidationError("mean vector length must equal m");
  std::vector<double> common(n);
  std::vector<double> idio(n * m);
  for (std::size_t r = 0; r < n; ++r) {
    common[r] = gen.normal();
    for (std::size_t c = 0; c < m; ++c) idio[r * m + c] = gen.normal();
  }
  DataMatrix data{n, m, std::vector<double>(n * m)};
  kernels::one_factor(common, idio, mu, std::sqrt(rho), std::sqrt(1.0 - rho), data.values);
  return data;
}

double t_pvalue_from_moments(double mean, double sum_sq_dev, std::size_t n,
                             const StudentT& dist) {
  if (n < 2) throw ValidationError("t-test needs at least two observations");
  if (!(sum_sq_dev > 0.0)) {
    throw DegenerateSampleError("t-test sample has zero variance");
  }
  const double nn = static_cast<double>(n);
  const double sd = std::sqrt(sum_sq_dev / (nn - 1.0));
  const double t = mean / (sd / std::sqrt(nn));
  return dist.sf(t);
}

double one_sample_t_pvalue(std::span<const double> column) {
  if (column.size() < 2) throw ValidationError("t-test needs at least two observations");
  double mean = 0.0;
  double ss = 0.0;
  kernels::column_moments(column, column.size(), 1, std::span<double>(&mean, 1),
                          std::span<double>(&ss, 1));
  return t_pvalue_from_moments(mean, ss, column.size(),
                               StudentT(static_cast<double>(column.size() - 1)));
}

std::vector<double> column_t_pvalues(const DataMatrix& data, const StudentT& dist) {
  std::vector<double> mean(data.cols);
  std::vector<double> ss(data.cols);
  kernels::column_moments(data.values, data.rows, data.cols, mean, ss);
  std::vector<double> p(data.cols);
  for (std::size_t c = 0; c < data.cols; ++c) {
    p[c] = t_pvalue_from_moments(mean[c], ss[c], data.rows, dist);
  }
  return p;
}

std::size_t SimulationConfig::null_count() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(m) * pi0));
}

void SimulationConfig::validate() const {
  if (m < 2) throw ValidationError("simulation: m must be at least 2");
  if (!(pi0 > 0.0 && pi0 < 1.0)) {
    throw ValidationError("simulation: pi0 must lie in (0,1) so that m0 and m1 are both positive");
  }
  const double m0 = static_cast<double>(m) * pi0;
  if (std::fabs(m0 - std::round(m0)) > 1e-9) {
    std::ostringstream msg;
    msg << "simulation: m * pi0 = " << m0 << " is not an integer";
    throw ValidationError(msg.str());
  }
  const std::size_t nulls = null_count();
  if (nulls < 1 || nulls >= m) {
    throw ValidationError("simulation: need at least one true and one false null");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw ValidationError("simulation: rho must lie in [0,1)");
  if (n < 2) throw ValidationError("simulation: n must be at least 2");
  if (reps < 1) throw ValidationError("simulation: reps must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("simulation: alpha must lie in (0,1)");
  if (!std::isfinite(mu_alt)) throw ValidationError("simulation: mu_alt must be finite");
}

const ProcedureSummary& SimulationResult::summary(Procedure procedure) const {
  for (const auto& s : summaries) {
    if (s.procedure == procedure) return s;
  }
  throw UsageError("no summary for procedure");
}

double proportion_se(double v, std::size_t reps) {
  return std::sqrt(v * (1.0 - v) / static_cast<double>(reps));
}

namespace {

constexpr std::array<Procedure, 3> kSimulated{Procedure::Holm, Procedure::Whp,
                                              Procedure::Wap};

struct ReplicateOutcome {
  std::array<std::uint8_t, 3> error{};
  std::array<std::uint32_t, 3> true_rejections{};
  std::uint8_t resampled = 0;
};

}  // namespace

SimulationResult run_simulation(const SimulationConfig& config) {
  config.validate();
  const std::size_t m = config.m;
  const std::size_t m0 = config.null_count();
  const std::size_t m1 = m - m0;

  NullMask nulls(m, false);
  std::vector<double> mu(m, config.mu_alt);
  for (std::size_t i = 0; i < m0; ++i) {
    nulls[i] = true;
    mu[i] = 0.0;
  }
  const StudentT dist(static_cast<double>(config.n - 1));

  std::vector<ReplicateOutcome> outcomes(config.reps);
  detail::for_each_index(config.reps, config.threads, [&](std::size_t k) {
    Rng gen = Rng::substream(config.seed, k);
    ReplicateOutcome& out = outcomes[k];
    const auto weights = weight_scenario(config.scenario, nulls, gen);
    std::vector<double> p;
    try {
      p = column_t_pvalues(sample_equicorrelated(m, config.rho, mu, config.n, gen), dist);
    } catch (const DegenerateSampleError&) {
      out.resampled = 1;
      p = column_t_pvalues(sample_equicorrelated(m, config.rho, mu, config.n, gen), dist);
    }
    const auto problem = TestingProblem::from_values(std::move(p), weights, config.alpha);

    std::array<RejectionSet, 3> rejections;
    for (std::size_t a = 0; a < kSimulated.size(); ++a) {
      rejections[a] = run_procedure(kSimulated[a], problem);
    }
    if (!rejections[2].is_subset_of(rejections[1])) {
      throw InvariantError("replicate " + std::to_string(k) +
                           ": WAP rejected a hypothesis that WHP did not");
    }
    for (std::size_t a = 0; a < kSimulated.size(); ++a) {
      for (std::size_t i : rejections[a].rejected()) {
        if (i < m0) {
          out.error[a] = 1;
        } else {
          ++out.true_rejections[a];
        }
      }
    }
  });

  SimulationResult result;
  result.config = config;
  for (std::size_t a = 0; a < kSimulated.size(); ++a) {
    ProcedureSummary& s = result.summaries[a];
    s.procedure = kSimulated[a];
    for (const auto& o : outcomes) {
      s.familywise_errors += o.error[a];
      s.true_rejections += o.true_rejections[a];
    }
    const double reps = static_cast<double>(config.reps);
    s.fwer = static_cast<double>(s.familywise_errors) / reps;
    s.power = static_cast<double>(s.true_rejections) / (reps * static_cast<double>(m1));
    s.fwer_se = proportion_se(s.fwer, config.reps);
    s.power_se = proportion_se(s.power, config.reps);
  }
  for (const auto& o : outcomes) result.resamples += o.resampled;
  return result;
}

namespace {

void require_positive_weights(std::span<const double> w, const char* who) {
  if (w.empty()) throw ValidationError(std::string(who) + ": no weights");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0 && std::isfinite(w[i]))) {
      throw ValidationError(std::string(who) + ": weights must be positive and finite", i);
    }
  }
}

}  // namespace

LfcSample lfc_whp_sampler(std::span<const double> null_weights, Rng& gen) {
  require_positive_weights(null_weights, "lfc_whp_sampler");
  double total = 0.0;
  for (double w : null_weights) total += w;

  // Select i with probability w_i / W.
  const double u = gen.uniform() * total;
  std::size_t selected = null_weights.size() - 1;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < null_weights.size(); ++i) {
    cumulative += null_weights[i];
    if (u < cumulative) {
      selected = i;
      break;
    }
  }

  LfcSample sample;
  sample.selected = selected;
  sample.p.resize(null_weights.size());
  const double cut = 1.0 / total;
  for (std::size_t i = 0; i < null_weights.size(); ++i) {
    const double w = null_weights[i];
    const double weighted = i == selected ? gen.uniform(0.0, cut) : gen.uniform(cut, 1.0 / w);
    sample.p[i] = std::min(w * weighted, 1.0);
  }
  return sample;
}

LfcSample lfc_stepdown_falsifier(std::span<const double> critical_values,
                                 std::span<const double> weights, std::size_t r,
                                 Rng& gen) {
  require_positive_weights(weights, "lfc_stepdown_falsifier");
  const std::size_t m = weights.size();
  if (critical_values.size() != m) {
    throw ValidationError("lfc_stepdown_falsifier: need one critical value per hypothesis");
  }
  if (r < 1 || r > m) throw ValidationError("lfc_stepdown_falsifier: r must lie in [1, m]");
  for (std::size_t k = 0; k < m; ++k) {
    if (!(critical_values[k] > 0.0) || (k > 0 && critical_values[k] < critical_values[k - 1])) {
      throw ValidationError(
          "lfc_stepdown_falsifier: critical values must be positive and nondecreasing", k);
    }
  }
  const std::size_t first = r - 1;
  double tail = 0.0;
  for (std::size_t k = first; k < m; ++k) tail += weights[k];
  const double tau = std::min(critical_values[first], 1.0 / tail);

  // j = k with probability w_k tau; no selection with probability 1 - l tau.
  const double u = gen.uniform();
  std::optional<std::size_t> selected;
  double cumulative = 0.0;
  for (std::size_t k = first; k < m; ++k) {
    cumulative += weights[k] * tau;
    if (u < cumulative) {
      selected = k;
      break;
    }
  }

  LfcSample sample;
  sample.selected = selected;
  sample.p.assign(m, 0.0);
  for (std::size_t k = first; k < m; ++k) {
    const double weighted = selected == k ? gen.uniform(0.0, tau)
                                          : gen.uniform(tau, 1.0 / weights[k]);
    sample.p[k] = std::min(weights[k] * weighted, 1.0);
  }
  return sample;
}

SharpnessEstimate estimate_sharpness(Procedure procedure, std::span<const double> weights,
                                     std::size_t m0, double alpha, std::size_t reps,
                                     std::uint64_t seed, std::size_t threads) {
  if (procedure == Procedure::Holm) {
    throw UsageError("estimate_sharpness: procedure must be WHP or WAP");
  }
  require_positive_weights(weights, "estimate_sharpness");
  if (reps < 1) throw ValidationError("estimate_sharpness: reps must be at least 1");
  if (m0 < 1 || m0 > weights.size()) {
    throw ValidationError("estimate_sharpness: m0 must lie in [1, m]");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("estimate_sharpness: alpha must lie in (0,1)");
  if (procedure == Procedure::Wap) {
    const auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
    if (*lo / *hi < alpha) {
      std::ostringstream msg;
      msg << "estimate_sharpness: WAP attains its bound only when min w / max w >= alpha"
          << " (got " << *lo / *hi << " < " << alpha << ")";
      throw ValidationError(msg.str());
    }
  }

  const std::vector<double> all(weights.begin(), weights.end());
  const auto null_weights = std::span<const double>(all).first(m0);
  std::vector<std::uint8_t> error(reps, 0);
  detail::for_each_index(reps, threads, [&](std::size_t k) {
    Rng gen = Rng::substream(seed, k);
    auto sample = lfc_whp_sampler(null_weights, gen);
    sample.p.resize(all.size(), 0.0);  // false nulls sit at 0
    const auto problem = TestingProblem::from_values(std::move(sample.p), all, alpha);
    const auto rejections = run_procedure(procedure, problem);
    for (std::size_t i : rejections.rejected()) {
      if (i < m0) {
        error[k] = 1;
        break;
      }
    }
  });

  SharpnessEstimate est;
  est.reps = reps;
  for (auto e : error) est.errors += e;
  est.fwer = static_cast<double>(est.errors) / static_cast<double>(reps);
  est.se = proportion_se(est.fwer, reps);
  return est;
}

}  // namespace wholm
