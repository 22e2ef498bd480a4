#include "bpbr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bpbr/error.hpp"

namespace bpbr {

MedianRanks shifted_median_ranks(std::size_t N, std::size_t K) {
  if (N == 0) throw Error(ErrorCode::OffsetOutOfRange, "no slopes");
  MedianRanks r;
  if (N % 2 == 1) {
    r.lower = r.upper = (N + 1) / 2 + K;
  } else {
    r.lower = N / 2 + K;
    r.upper = r.lower + 1;
  }
  if (r.upper > N) {
    throw Error(ErrorCode::OffsetOutOfRange,
                "shifted rank " + std::to_string(r.upper) + " exceeds N=" +
                    std::to_string(N) + " (K=" + std::to_string(K) + ")");
  }
  return r;
}

double estimate_beta(const SlopeSet& ss) {
  const MedianRanks r = shifted_median_ranks(ss.N(), ss.K);
  const double lo = ss.order_statistic(r.lower);
  if (r.lower == r.upper) return lo;
  return 0.5 * (lo + ss.order_statistic(r.upper));
}

double median_inplace(std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "median of no values");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double below = *std::max_element(values.begin(), mid);
  return 0.5 * (below + *mid);
}

double estimate_alpha(const GroupedDataset& ds, double beta_hat) {
  if (!std::isfinite(beta_hat)) {
    throw Error(ErrorCode::NonFiniteValue, "slope estimate is not finite");
  }
  std::vector<double> residuals;
  residuals.reserve(ds.size());
  for (const auto& p : ds.points()) residuals.push_back(p.y - beta_hat * p.x);
  return median_inplace(residuals);
}

PointEstimate fit(const GroupedDataset& ds, RegressionMode mode,
                  const SlopeOptions& options) {
  const SlopeSet ss = enumerate_slopes(ds, mode, options);
  PointEstimate est;
  est.beta_hat = estimate_beta(ss);
  est.alpha_hat = estimate_alpha(ds, est.beta_hat);
  est.N = ss.N();
  est.K = ss.K;
  est.mode = mode;
  return est;
}

}  // namespace bpbr
