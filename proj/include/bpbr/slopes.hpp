#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "bpbr/dataset.hpp"

namespace bpbr {

/// Block: cross-group pairs only, with offset K.
/// Classic: every pair, with offset K (ungrouped Passing-Bablok).
/// TheilSen: every pair, K forced to 0.
enum class RegressionMode { Block, Classic, TheilSen };

std::string_view mode_name(RegressionMode mode) noexcept;
RegressionMode parse_mode(std::string_view text);

struct SlopeOptions {
  /// Absolute tolerance for the identical-point, vertical-pair and
  /// offset-threshold comparisons. 0 means exact comparison.
  double tie_tolerance = 0.0;
  /// Slopes equal to this value are discarded and slopes below it are counted
  /// in K. -1 corresponds to testing beta = 1; -beta0 generalises it, though
  /// the estimator is then no longer the published one.
  double offset_threshold = -1.0;
};

/// Counts gathered while enumerating pairs.
struct SlopeTally {
  std::size_t N = 0;  // retained slopes
  std::size_t K = 0;  // retained slopes below the offset threshold
  std::size_t discarded_identical = 0;
  std::size_t discarded_minus_one = 0;
};

/// Retained pairwise slopes in ascending order; +inf marks vertical pairs.
struct SlopeSet {
  std::vector<double> slopes_sorted;
  std::size_t K = 0;
  std::size_t discarded_identical = 0;
  std::size_t discarded_minus_one = 0;
  RegressionMode mode = RegressionMode::Block;

  std::size_t N() const noexcept { return slopes_sorted.size(); }

  /// 1-based order statistic S_(rank). Throws IndexOutOfRange.
  double order_statistic(std::size_t rank) const;

  bool operator==(const SlopeSet&) const = default;
};

/// Appends the retained slopes to `out` unsorted and returns the tally.
/// Throws BlockModeNeedsTwoGroups and NoSlopesRemaining.
SlopeTally collect_slopes(const GroupedDataset& ds, RegressionMode mode,
                          const SlopeOptions& options, std::vector<double>& out);

SlopeSet enumerate_slopes(const GroupedDataset& ds, RegressionMode mode,
                          const SlopeOptions& options = {});

/// Values of the given 1-based order statistics of `values`, returned in the
/// order the ranks were passed. Partially reorders `values`. Equal to looking
/// the ranks up in a fully sorted copy.
std::vector<double> select_order_statistics(std::vector<double>& values,
                                            std::span<const std::size_t> ranks);

struct SignCounts {
  std::size_t P = 0;  // slopes > beta0
  std::size_t Q = 0;  // slopes < beta0
  long long C_tilde = 0;
};

SignCounts count_signs(const SlopeSet& ss, double beta0);
/// Same counts over an arbitrary (unsorted) slope sample.
SignCounts count_signs(std::span<const double> slopes, double beta0);

}  // namespace bpbr
