#pragma once

// Monte Carlo machinery: equicorrelated normal data, one-sided t-test
// p-values, the four weight scenarios, FWER/power estimation, and
// least-favorable-configuration samplers for sharpness checks.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wholm/core.hpp"
#include "wholm/rng.hpp"
#include "wholm/student_t.hpp"

namespace wholm {

/// Null weights ~ U(1,2) in S1-S3; alternatives ~ U(6,10), U(2,10), U(2,6).
/// S4 draws every weight from U(1,6).
enum class WeightScenario { S1, S2, S3, S4 };

std::string_view scenario_name(WeightScenario scenario);
/// Accepts "S1".."S4" (case-insensitive) or "1".."4".
std::optional<WeightScenario> parse_scenario(std::string_view text);

/// true marks a true null hypothesis.
using NullMask = std::vector<bool>;

std::vector<double> weight_scenario(WeightScenario scenario, const NullMask& nulls,
                                    Rng& gen);

/// Row-major n x m sample.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::vector<double> column(std::size_t c) const;
};

/// n rows, each N(mu, Sigma) with unit variances and all correlations rho,
/// built as sqrt(rho) Z0 + sqrt(1 - rho) Z_c + mu_c. Per row the common
/// factor is drawn first, then the m idiosyncratic normals.
DataMatrix sample_equicorrelated(std::size_t m, double rho, std::span<const double> mu,
                                 std::size_t n, Rng& gen);

/// One-sided p-value for H: mu = 0 vs mu > 0, t = mean / (sd / sqrt(n))
/// with the n - 1 variance denominator. Throws DegenerateSampleError on
/// zero sample variance.
double one_sample_t_pvalue(std::span<const double> column);

/// Same test from precomputed moments (sum of squared deviations).
double t_pvalue_from_moments(double mean, double sum_sq_dev, std::size_t n,
                             const StudentT& dist);

/// One p-value per column of the data matrix.
std::vector<double> column_t_pvalues(const DataMatrix& data, const StudentT& dist);

struct SimulationConfig {
  std::size_t m = 5;
  double pi0 = 0.4;
  double rho = 0.0;
  std::size_t n = 15;
  double mu_alt = 0.7;
  double alpha = 0.05;
  std::size_t reps = 1000;
  WeightScenario scenario = WeightScenario::S2;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  std::size_t threads = 0;

  /// Throws ValidationError: m * pi0 must be an integer with 1 <= m0 < m,
  /// rho in [0,1), n >= 2, reps >= 1, alpha in (0,1).
  void validate() const;
  std::size_t null_count() const;
};

struct ProcedureSummary {
  Procedure procedure = Procedure::Holm;
  double fwer = 0.0;
  double fwer_se = 0.0;
  double power = 0.0;
  double power_se = 0.0;
  std::size_t familywise_errors = 0;  // replicates with V >= 1
  std::size_t true_rejections = 0;    // summed over replicates
};

struct SimulationResult {
  SimulationConfig config;
  std::array<ProcedureSummary, 3> summaries;  // Holm, WHP, WAP
  std::size_t resamples = 0;  // replicates redrawn after a zero-variance column

  const ProcedureSummary& summary(Procedure procedure) const;
};

/// Per replicate: fresh weights, fresh data, m one-sided p-values, then
/// Holm, WHP and WAP at alpha. Replicate k uses Rng::substream(seed, k).
/// Throws InvariantError if a replicate ever has WAP rejections outside WHP's.
SimulationResult run_simulation(const SimulationConfig& config);

/// sqrt(v (1 - v) / reps)
double proportion_se(double v, std::size_t reps);

struct LfcSample {
  std::vector<double> p;
  std::optional<std::size_t> selected;
};

/// Joint law of the true-null p-values that makes WHP's FWER exactly alpha:
/// one index i is selected with probability w_i / W (W = sum w). It gets
/// P_i = w_i U, U ~ U(0, 1/W); every other j gets P_j = w_j U_j with
/// U_j ~ U(1/W, 1/w_j). Each P_i is marginally U(0,1).
LfcSample lfc_whp_sampler(std::span<const double> null_weights, Rng& gen);

/// Falsifier for a weighted step-down with critical values c (by rank).
/// The first r - 1 p-values are 0; with l = sum_{k>=r} w_k and
/// tau = min(c_r, 1/l), index k >= r is selected with probability w_k tau
/// (none with 1 - l tau). The selected index gets weighted p ~ U(0, tau),
/// the rest U(tau, 1/w_k). Returned p-values are raw (w times weighted).
/// r is 1-based.
LfcSample lfc_stepdown_falsifier(std::span<const double> critical_values,
                                 std::span<const double> weights, std::size_t r,
                                 Rng& gen);

struct SharpnessEstimate {
  double fwer = 0.0;
  double se = 0.0;
  std::size_t errors = 0;
  std::size_t reps = 0;
};

/// Empirical FWER of WHP or WAP under the least-favorable configuration.
/// Hypotheses 0..m0-1 are true nulls drawn by lfc_whp_sampler; any others
/// are false nulls with p = 0. WAP additionally requires
/// min w / max w >= alpha, without which its LFC bound is not attained.
SharpnessEstimate estimate_sharpness(Procedure procedure, std::span<const double> weights,
                                     std::size_t m0, double alpha, std::size_t reps,
                                     std::uint64_t seed, std::size_t threads = 0);

}  // namespace wholm
