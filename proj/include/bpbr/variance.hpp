#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bpbr/dataset.hpp"

namespace bpbr {

enum class QSource { AssumedZero, Empirical, MonteCarlo };

std::string_view q_source_name(QSource source) noexcept;

/// q(k, u): probability that a point of group u falls strictly between two
/// points of group k on the x-axis. Not symmetric; the diagonal is unused.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t m, QSource source) : m_(m), q_(m * m, 0.0), source_(source) {}

  static QMatrix zeros(std::size_t m) { return QMatrix(m, QSource::AssumedZero); }

  std::size_t size() const noexcept { return m_; }
  QSource source() const noexcept { return source_; }

  double operator()(std::size_t k, std::size_t u) const { return q_.at(k * m_ + u); }
  void set(std::size_t k, std::size_t u, double value);

  /// Sum over all ordered pairs k != u.
  double off_diagonal_sum() const;

 private:
  std::size_t m_ = 0;
  std::vector<double> q_;
  QSource source_ = QSource::AssumedZero;
};

enum class VarianceKind {
  ClassicUngrouped,
  NonOverlapping,
  ExactWithQ,
  EqualGroupsNonOverlapping,
};

std::string_view variance_kind_name(VarianceKind kind) noexcept;

/// Variance of the signed slope count C~ used to build the slope interval.
struct VarianceModel {
  VarianceKind kind = VarianceKind::NonOverlapping;
  double value = 0.0;
  std::vector<std::size_t> group_sizes;
  std::optional<QMatrix> q;
};

/// n(n-1)(2n+5)/18. Requires n >= 2.
double variance_classic(std::size_t n);

/// Full grouped variance with overlap fractions:
///   (n(n-1)(2n+5) - sum_k p_k(p_k-1)((2p_k+5) + 4 sum_{u!=k} p_u q_ku)) / 18.
/// Throws NegativeVariance when q is inconsistent with the group sizes.
double variance_exact(std::span<const std::size_t> group_sizes, const QMatrix& q);

/// Equal group sizes p, n = m p:
///   n/18 (3(n-p) + 2(n^2-p^2)) - 2/9 p^2 (p-1) q_sum.
double variance_equal_groups(std::size_t m, std::size_t p, double q_sum);

/// Separated groups (q = 0); coincides with the tied-ranks correction.
double variance_nonoverlapping(std::span<const std::size_t> group_sizes);

/// (1/9) n^3 (1 - 1/m^2), the large-n form for equal separated groups.
double asymptotic_variance_separated_equal(std::size_t n, std::size_t m);

/// Triplet counting on the observed x values. Groups with fewer than two
/// points get a zero row.
QMatrix estimate_q_empirical(const GroupedDataset& ds);

/// Large-n variance for unequal, possibly overlapping groups evaluated at the
/// finite group sizes. `stated` uses (1 - l_m - l_o); `with_factor_two` uses
/// (1 - l_m - 2 l_o), which is what the leading order of variance_exact gives.
/// Diagnostic only; inference always uses the exact formula.
struct AsymptoticDiagnostic {
  double l_m = 0.0;
  double l_o = 0.0;
  double stated = 0.0;
  double with_factor_two = 0.0;
  double exact = 0.0;
};

AsymptoticDiagnostic asymptotic_diagnostic(std::span<const std::size_t> group_sizes,
                                           const QMatrix& q);

VarianceModel classic_variance_model(std::size_t n);
VarianceModel nonoverlapping_variance_model(std::span<const std::size_t> group_sizes);
VarianceModel exact_variance_model(std::span<const std::size_t> group_sizes, QMatrix q);

}  // namespace bpbr
