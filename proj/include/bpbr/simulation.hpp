#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bpbr/dataset.hpp"
#include "bpbr/inference.hpp"
#include "bpbr/slopes.hpp"

namespace bpbr {

enum class ErrorDistribution { Normal, Uniform };

std::string_view distribution_name(ErrorDistribution d) noexcept;
ErrorDistribution parse_distribution(std::string_view text);

/// Generative design: group k (1-based) has true value x~_k = k unless
/// `true_x` overrides it, y~_k = alpha + beta x~_k, and every reading gets an
/// iid error with standard deviation `sigma` on both axes.
struct Scenario {
  std::string label;
  std::vector<std::size_t> group_sizes{100, 100};
  double beta = 1.0;
  double alpha = 0.0;
  double sigma = 0.2;
  ErrorDistribution error_dist = ErrorDistribution::Normal;
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  double gamma = 0.05;
  std::vector<RegressionMode> modes{RegressionMode::Classic, RegressionMode::Block};
  VarianceSource variance_source = VarianceSource::Conservative;
  std::vector<double> true_x;  // empty: 1..m

  /// Throws InvalidArgument.
  void validate() const;
  double true_x_of(std::size_t group) const;
};

struct RunOptions {
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Reproducible in isolation: the stream depends only on (seed, replicate).
GroupedDataset generate_dataset(const Scenario& sc, std::uint64_t replicate_index);

struct ModeSummary {
  RegressionMode mode = RegressionMode::Block;
  std::size_t replicates = 0;  // successful
  std::size_t failures = 0;
  double mean_beta_hat = 0.0;
  double sd_beta_hat = 0.0;
  double mean_ci_lower = 0.0;
  double mean_ci_upper = 0.0;
  double coverage = 0.0;         // true beta inside the slope interval
  double power = 0.0;            // 1 outside the slope interval
  double mc_se_coverage = 0.0;   // sqrt(c (1 - c) / replicates)
  double mc_se_power = 0.0;
  double alpha_coverage = 0.0;   // true alpha inside the intercept interval
};

struct SimSummary {
  Scenario scenario;
  std::vector<ModeSummary> modes;

  const ModeSummary& for_mode(RegressionMode mode) const;
};

/// Per-replicate result of one mode; exposed for tests.
struct ReplicateOutcome {
  bool ok = false;
  double beta_hat = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bool alpha_covered = false;
};

/// Fit plus slope interval via order-statistic selection instead of a full
/// sort. Same numbers as equivalence_test. `scratch` is reused between calls.
ReplicateOutcome evaluate_replicate(const GroupedDataset& ds, RegressionMode mode,
                                    const Scenario& sc, std::vector<double>& scratch);

/// Throws AllReplicatesFailed when a mode has no successful replicate.
SimSummary run_scenario(const Scenario& sc, const RunOptions& options = {});

/// The 32 cells of the published grid: beta in {1.0, 0.98, 0.8, 0.2} x group
/// configurations {100-100, 180-20, 10x100, 820-9x20} x sigma {0.2 "low",
/// 0.4 "high"}, each fitted with the classic and the block method. Each cell
/// gets its own seed derived from `seed`.
std::vector<Scenario> table1_scenarios(std::size_t replicates, std::uint64_t seed);

std::vector<SimSummary> table1_suite(std::size_t replicates, std::uint64_t seed,
                                     const RunOptions& options = {});

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace bpbr
