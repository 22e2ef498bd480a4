#pragma once

#include <cstddef>
#include <string_view>

#include "bpbr/dataset.hpp"
#include "bpbr/estimator.hpp"
#include "bpbr/slopes.hpp"
#include "bpbr/variance.hpp"

namespace bpbr {

/// Inverse standard normal CDF. Absolute error below 1e-8 on
/// [1e-10, 1 - 1e-10]. Throws OutOfDomain outside (0, 1).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double z);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;

  bool contains(double v) const noexcept { return lower <= v && v <= upper; }
  bool operator==(const ConfidenceInterval&) const = default;
};

/// Rank arithmetic of the slope interval, independent of the slope values.
/// M1 = floor((N - C_gamma) / 2), M2 = N - M1 + 1, C_gamma = z * sqrt(V).
struct CiRanks {
  long long M1 = 0;
  long long M2 = 0;
  double C_gamma = 0.0;
  std::size_t lower_rank = 0;  // M1 + K
  std::size_t upper_rank = 0;  // M2 + K
};

/// gamma is the error probability (0.05 gives a 95% interval).
/// Throws IndexOutOfRange when M1 + K < 1 or M2 + K > N.
CiRanks beta_ci_ranks(std::size_t N, std::size_t K, double variance, double gamma);

struct BetaInterval {
  ConfidenceInterval ci;
  long long M1 = 0;
  long long M2 = 0;
  double C_gamma = 0.0;
};

BetaInterval beta_ci(const SlopeSet& ss, const VarianceModel& variance, double gamma);

/// [median(y - b_U x), median(y - b_L x)], swapped if reversed.
ConfidenceInterval alpha_ci(const GroupedDataset& ds, const ConfidenceInterval& beta);

enum class Verdict { Equivalent, ConstantBias, ProportionalBias, Both };

std::string_view verdict_name(Verdict v) noexcept;

/// Conservative: tied-ranks (q = 0) variance. EmpiricalQ: exact variance with
/// q estimated from the observed x values. Ungrouped modes always use the
/// classic variance.
enum class VarianceSource { Conservative, EmpiricalQ };

std::string_view variance_source_name(VarianceSource s) noexcept;
VarianceSource parse_variance_source(std::string_view text);

VarianceModel select_variance(const GroupedDataset& ds, RegressionMode mode,
                              VarianceSource source);

struct FitResult {
  PointEstimate estimate;
  ConfidenceInterval beta_ci;
  ConfidenceInterval alpha_ci;
  VarianceModel variance;
  Verdict verdict = Verdict::Equivalent;
  long long M1 = 0;
  long long M2 = 0;
  double C_gamma = 0.0;
  std::size_t discarded_identical = 0;
  std::size_t discarded_minus_one = 0;
};

Verdict classify(const ConfidenceInterval& beta, const ConfidenceInterval& alpha) noexcept;

/// Point estimates, both intervals and the two-method verdict: equivalent iff
/// 1 is inside the slope interval and 0 inside the intercept interval.
FitResult equivalence_test(const GroupedDataset& ds, RegressionMode mode, double gamma,
                           VarianceSource source = VarianceSource::Conservative,
                           const SlopeOptions& options = {});

}  // namespace bpbr
