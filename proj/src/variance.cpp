#include "bpbr/variance.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "bpbr/error.hpp"

namespace bpbr {

std::string_view q_source_name(QSource source) noexcept {
  switch (source) {
    case QSource::AssumedZero: return "assumed-zero";
    case QSource::Empirical: return "empirical";
    case QSource::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

std::string_view variance_kind_name(VarianceKind kind) noexcept {
  switch (kind) {
    case VarianceKind::ClassicUngrouped: return "classic-ungrouped";
    case VarianceKind::NonOverlapping: return "non-overlapping";
    case VarianceKind::ExactWithQ: return "exact-with-q";
    case VarianceKind::EqualGroupsNonOverlapping: return "equal-groups-non-overlapping";
  }
  return "unknown";
}

void QMatrix::set(std::size_t k, std::size_t u, double value) {
  if (k == u) return;
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "q(" + std::to_string(k) + "," + std::to_string(u) + ") outside [0,1]");
  }
  q_.at(k * m_ + u) = value;
}

double QMatrix::off_diagonal_sum() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < m_; ++k) {
    for (std::size_t u = 0; u < m_; ++u) {
      if (k != u) sum += q_[k * m_ + u];
    }
  }
  return sum;
}

namespace {

__extension__ using Wide = unsigned __int128;

// n(n-1)(2n+5), exact.
Wide classic_term(std::uint64_t n) {
  return static_cast<Wide>(n) * (n - 1) * (2 * n + 5);
}

// n(n-1)(2n+5) - sum_k p_k(p_k-1)(2p_k+5), exact; never negative.
Wide nonoverlapping_term(std::span<const std::size_t> p) {
  std::uint64_t n = 0;
  Wide ties = 0;
  for (std::size_t pk : p) {
    if (pk == 0) throw Error(ErrorCode::InvalidArgument, "group size 0");
    n += pk;
    ties += classic_term(pk);
  }
  return (n >= 1 ? classic_term(n) : 0) - ties;
}

}  // namespace

double variance_classic(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "classic variance needs n >= 2");
  return static_cast<double>(classic_term(n)) / 18.0;
}

double variance_nonoverlapping(std::span<const std::size_t> group_sizes) {
  if (group_sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no groups");
  return static_cast<double>(nonoverlapping_term(group_sizes)) / 18.0;
}

double variance_exact(std::span<const std::size_t> group_sizes, const QMatrix& q) {
  const std::size_t m = group_sizes.size();
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "no groups");
  if (q.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "q matrix size does not match group count");
  }
  const double base = static_cast<double>(nonoverlapping_term(group_sizes));
  double overlap = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double pk = static_cast<double>(group_sizes[k]);
    double inner = 0.0;
    for (std::size_t u = 0; u < m; ++u) {
      if (u != k) inner += static_cast<double>(group_sizes[u]) * q(k, u);
    }
    overlap += pk * (pk - 1.0) * inner;
  }
  const double value = (base - 4.0 * overlap) / 18.0;
  if (value < 0.0) {
    throw Error(ErrorCode::NegativeVariance, "q inconsistent with group sizes");
  }
  return value;
}

double variance_equal_groups(std::size_t m, std::size_t p, double q_sum) {
  if (m < 1 || p < 1) throw Error(ErrorCode::InvalidArgument, "m and p must be >= 1");
  if (!(q_sum >= 0.0)) throw Error(ErrorCode::InvalidArgument, "q_sum must be >= 0");
  const std::uint64_t n = static_cast<std::uint64_t>(m) * p;
  const Wide base = static_cast<Wide>(n) *
                    (3 * (n - p) + 2 * (static_cast<Wide>(n) * n - static_cast<Wide>(p) * p));
  const double pd = static_cast<double>(p);
  const double value =
      static_cast<double>(base) / 18.0 - 2.0 * pd * pd * (pd - 1.0) * q_sum / 9.0;
  if (value < 0.0) {
    throw Error(ErrorCode::NegativeVariance, "q_sum inconsistent with group sizes");
  }
  return value;
}

double asymptotic_variance_separated_equal(std::size_t n, std::size_t m) {
  if (m == 0 || n % m != 0) {
    throw Error(ErrorCode::InvalidArgument, "n must be divisible by m");
  }
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return nd * nd * nd * (1.0 - 1.0 / (md * md)) / 9.0;
}

QMatrix estimate_q_empirical(const GroupedDataset& ds) {
  const std::size_t m = ds.group_count();
  QMatrix q(m, QSource::Empirical);
  std::vector<std::vector<double>> xs(m);
  for (std::size_t k = 0; k < m; ++k) {
    xs[k] = ds.group_x(k);
    std::sort(xs[k].begin(), xs[k].end());
  }
  for (std::size_t k = 0; k < m; ++k) {
    const auto& gk = xs[k];
    const std::size_t pk = gk.size();
    if (pk < 2) continue;
    const double pairs = static_cast<double>(pk) * static_cast<double>(pk - 1) / 2.0;
    for (std::size_t u = 0; u < m; ++u) {
      if (u == k) continue;
      // A point at v is strictly inside {a, b} exactly when a < v < b, so
      // with sorted x the count is (#below) * (#above).
      std::uint64_t count = 0;
      for (double v : xs[u]) {
        const auto below = std::lower_bound(gk.begin(), gk.end(), v) - gk.begin();
        const auto above = gk.end() - std::upper_bound(gk.begin(), gk.end(), v);
        count += static_cast<std::uint64_t>(below) * static_cast<std::uint64_t>(above);
      }
      q.set(k, u, static_cast<double>(count) / (pairs * static_cast<double>(xs[u].size())));
    }
  }
  return q;
}

AsymptoticDiagnostic asymptotic_diagnostic(std::span<const std::size_t> group_sizes,
                                           const QMatrix& q) {
  const std::size_t m = group_sizes.size();
  if (q.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "q matrix size does not match group count");
  }
  const double n = static_cast<double>(
      std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0}));
  const double n3 = n * n * n;
  AsymptoticDiagnostic d;
  for (std::size_t k = 0; k < m; ++k) {
    const double pk = static_cast<double>(group_sizes[k]);
    d.l_m += pk * pk * pk / n3;
    for (std::size_t u = 0; u < m; ++u) {
      if (u != k) d.l_o += pk * pk * static_cast<double>(group_sizes[u]) * q(k, u) / n3;
    }
  }
  d.stated = n3 * (1.0 - d.l_m - d.l_o) / 9.0;
  d.with_factor_two = n3 * (1.0 - d.l_m - 2.0 * d.l_o) / 9.0;
  d.exact = variance_exact(group_sizes, q);
  return d;
}

VarianceModel classic_variance_model(std::size_t n) {
  VarianceModel v;
  v.kind = VarianceKind::ClassicUngrouped;
  v.value = variance_classic(n);
  v.group_sizes.assign(n, 1);
  return v;
}

VarianceModel nonoverlapping_variance_model(std::span<const std::size_t> group_sizes) {
  VarianceModel v;
  const bool equal = std::all_of(group_sizes.begin(), group_sizes.end(),
                                 [&](std::size_t p) { return p == group_sizes.front(); });
  v.kind = equal ? VarianceKind::EqualGroupsNonOverlapping : VarianceKind::NonOverlapping;
  v.value = variance_nonoverlapping(group_sizes);
  v.group_sizes.assign(group_sizes.begin(), group_sizes.end());
  return v;
}

VarianceModel exact_variance_model(std::span<const std::size_t> group_sizes, QMatrix q) {
  VarianceModel v;
  v.kind = VarianceKind::ExactWithQ;
  v.value = variance_exact(group_sizes, q);
  v.group_sizes.assign(group_sizes.begin(), group_sizes.end());
  v.q = std::move(q);
  return v;
}

}  // namespace bpbr
