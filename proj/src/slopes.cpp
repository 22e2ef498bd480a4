#include "bpbr/slopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bpbr/error.hpp"

namespace bpbr {

std::string_view mode_name(RegressionMode mode) noexcept {
  switch (mode) {
    case RegressionMode::Block: return "block";
    case RegressionMode::Classic: return "classic";
    case RegressionMode::TheilSen: return "theil-sen";
  }
  return "unknown";
}

RegressionMode parse_mode(std::string_view text) {
  if (text == "block" || text == "bpbr") return RegressionMode::Block;
  if (text == "classic" || text == "cpbr") return RegressionMode::Classic;
  if (text == "theil-sen" || text == "theilsen") return RegressionMode::TheilSen;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

double SlopeSet::order_statistic(std::size_t rank) const {
  if (rank < 1 || rank > slopes_sorted.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "rank " + std::to_string(rank) + " outside 1.." +
                    std::to_string(slopes_sorted.size()));
  }
  return slopes_sorted[rank - 1];
}

SlopeTally collect_slopes(const GroupedDataset& ds, RegressionMode mode,
                          const SlopeOptions& options, std::vector<double>& out) {
  const bool block = mode == RegressionMode::Block;
  if (block && ds.group_count() < 2) {
    throw Error(ErrorCode::BlockModeNeedsTwoGroups,
                "dataset has " + std::to_string(ds.group_count()) + " group(s)");
  }
  const double tol = options.tie_tolerance;
  const double threshold = options.offset_threshold;
  constexpr double inf = std::numeric_limits<double>::infinity();

  const auto& pts = ds.points();
  const std::size_t n = pts.size();
  SlopeTally tally;
  const std::size_t start = out.size();
  for (std::size_t a = 0; a < n; ++a) {
    const Measurement& pa = pts[a];
    for (std::size_t b = a + 1; b < n; ++b) {
      const Measurement& pb = pts[b];
      if (block && pa.group == pb.group) continue;
      const double dx = pa.x - pb.x;
      const double dy = pa.y - pb.y;
      double s;
      if (std::abs(dx) <= tol) {
        if (std::abs(dy) <= tol) {
          ++tally.discarded_identical;
          continue;
        }
        // No orientation-free sign exists for an unordered vertical pair;
        // a fixed +inf keeps the slope set independent of row order.
        s = inf;
      } else {
        s = dy / dx;
        if (std::abs(s - threshold) <= tol) {
          ++tally.discarded_minus_one;
          continue;
        }
      }
      if (s < threshold - tol) ++tally.K;
      out.push_back(s);
    }
  }
  tally.N = out.size() - start;
  if (mode == RegressionMode::TheilSen) tally.K = 0;
  if (tally.N == 0) {
    throw Error(ErrorCode::NoSlopesRemaining,
                std::to_string(tally.discarded_identical) + " identical, " +
                    std::to_string(tally.discarded_minus_one) +
                    " at the offset threshold");
  }
  return tally;
}

SlopeSet enumerate_slopes(const GroupedDataset& ds, RegressionMode mode,
                          const SlopeOptions& options) {
  SlopeSet ss;
  ss.mode = mode;
  const SlopeTally tally = collect_slopes(ds, mode, options, ss.slopes_sorted);
  std::sort(ss.slopes_sorted.begin(), ss.slopes_sorted.end());
  ss.K = tally.K;
  ss.discarded_identical = tally.discarded_identical;
  ss.discarded_minus_one = tally.discarded_minus_one;
  return ss;
}

std::vector<double> select_order_statistics(std::vector<double>& values,
                                            std::span<const std::size_t> ranks) {
  std::vector<std::size_t> order(ranks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });

  std::vector<double> result(ranks.size());
  // Each selection only needs to look right of the previous pivot.
  auto first = values.begin();
  std::size_t previous = 0;
  bool have_previous = false;
  for (std::size_t i : order) {
    const std::size_t rank = ranks[i];
    if (rank < 1 || rank > values.size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "rank " + std::to_string(rank) + " outside 1.." +
                      std::to_string(values.size()));
    }
    if (have_previous && rank == previous) {
      result[i] = values[rank - 1];
      continue;
    }
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(first, nth, values.end());
    result[i] = *nth;
    first = nth + 1;
    previous = rank;
    have_previous = true;
  }
  return result;
}

SignCounts count_signs(const SlopeSet& ss, double beta0) {
  if (!std::isfinite(beta0)) throw Error(ErrorCode::InvalidArgument, "beta0 must be finite");
  const auto& s = ss.slopes_sorted;
  const auto lower = std::lower_bound(s.begin(), s.end(), beta0);
  const auto upper = std::upper_bound(lower, s.end(), beta0);
  SignCounts c;
  c.Q = static_cast<std::size_t>(lower - s.begin());
  c.P = static_cast<std::size_t>(s.end() - upper);
  c.C_tilde = static_cast<long long>(c.P) - static_cast<long long>(c.Q);
  return c;
}

SignCounts count_signs(std::span<const double> slopes, double beta0) {
  if (!std::isfinite(beta0)) throw Error(ErrorCode::InvalidArgument, "beta0 must be finite");
  SignCounts c;
  for (double s : slopes) {
    if (s > beta0) ++c.P;
    else if (s < beta0) ++c.Q;
  }
  c.C_tilde = static_cast<long long>(c.P) - static_cast<long long>(c.Q);
  return c;
}

}  // namespace bpbr
