#pragma once

#include <cstddef>
#include <vector>

#include "bpbr/dataset.hpp"
#include "bpbr/slopes.hpp"

namespace bpbr {

struct PointEstimate {
  double beta_hat = 0.0;
  double alpha_hat = 0.0;
  std::size_t N = 0;
  std::size_t K = 0;
  RegressionMode mode = RegressionMode::Block;

  bool operator==(const PointEstimate&) const = default;
};

/// 1-based ranks of the two order statistics averaged by the shifted median.
/// lower == upper when N is odd.
struct MedianRanks {
  std::size_t lower = 0;
  std::size_t upper = 0;
};

/// Throws OffsetOutOfRange when N == 0 or the shifted rank exceeds N.
MedianRanks shifted_median_ranks(std::size_t N, std::size_t K);

/// Shifted median of the slopes: S_((N+1)/2+K) for odd N, otherwise the
/// midpoint of S_(N/2+K) and S_(N/2+K+1).
double estimate_beta(const SlopeSet& ss);

/// Median of y - beta_hat * x over all points (midpoint for even n).
double estimate_alpha(const GroupedDataset& ds, double beta_hat);

/// Median with the midpoint convention; reorders `values`.
double median_inplace(std::vector<double>& values);

PointEstimate fit(const GroupedDataset& ds, RegressionMode mode,
                  const SlopeOptions& options = {});

}  // namespace bpbr
