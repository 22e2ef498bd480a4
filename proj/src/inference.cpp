#include "bpbr/inference.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bpbr/error.hpp"

namespace bpbr {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

namespace {

// Acklam's rational approximation (relative error ~1.2e-9).
double acklam(double p) {
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "probability must lie in (0,1)");
  }
  if (p == 0.5) return 0.0;
  // Work in the lower tail so the CDF residual is computed without
  // cancellation, then mirror.
  const bool upper = p > 0.5;
  const double tail = upper ? 1.0 - p : p;
  double x = acklam(tail);
  // One Halley step on Phi(x) - tail.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - tail;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

CiRanks beta_ci_ranks(std::size_t N, std::size_t K, double variance, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::OutOfDomain, "gamma must lie in (0,1)");
  }
  if (!(variance >= 0.0)) throw Error(ErrorCode::NegativeVariance, "variance < 0");
  if (N == 0) throw Error(ErrorCode::IndexOutOfRange, "no slopes");
  CiRanks r;
  r.C_gamma = normal_quantile(1.0 - gamma / 2.0) * std::sqrt(variance);
  const long long n = static_cast<long long>(N);
  r.M1 = static_cast<long long>(std::floor((static_cast<double>(N) - r.C_gamma) / 2.0));
  r.M2 = n - r.M1 + 1;
  const long long k = static_cast<long long>(K);
  if (r.M1 + k < 1 || r.M2 + k > n) {
    throw Error(ErrorCode::IndexOutOfRange,
                "interval ranks [" + std::to_string(r.M1 + k) + ", " +
                    std::to_string(r.M2 + k) + "] outside 1.." + std::to_string(N));
  }
  r.lower_rank = static_cast<std::size_t>(r.M1 + k);
  r.upper_rank = static_cast<std::size_t>(r.M2 + k);
  return r;
}

BetaInterval beta_ci(const SlopeSet& ss, const VarianceModel& variance, double gamma) {
  const CiRanks r = beta_ci_ranks(ss.N(), ss.K, variance.value, gamma);
  BetaInterval out;
  out.ci.lower = ss.order_statistic(r.lower_rank);
  out.ci.upper = ss.order_statistic(r.upper_rank);
  out.ci.level = 1.0 - gamma;
  out.M1 = r.M1;
  out.M2 = r.M2;
  out.C_gamma = r.C_gamma;
  return out;
}

ConfidenceInterval alpha_ci(const GroupedDataset& ds, const ConfidenceInterval& beta) {
  ConfidenceInterval ci;
  ci.level = beta.level;
  ci.lower = estimate_alpha(ds, beta.upper);
  ci.upper = estimate_alpha(ds, beta.lower);
  if (ci.lower > ci.upper) std::swap(ci.lower, ci.upper);
  return ci;
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::ConstantBias: return "ConstantBias";
    case Verdict::ProportionalBias: return "ProportionalBias";
    case Verdict::Both: return "Both";
  }
  return "Unknown";
}

std::string_view variance_source_name(VarianceSource s) noexcept {
  return s == VarianceSource::Conservative ? "conservative" : "empirical-q";
}

VarianceSource parse_variance_source(std::string_view text) {
  if (text == "conservative") return VarianceSource::Conservative;
  if (text == "empirical-q") return VarianceSource::EmpiricalQ;
  throw Error(ErrorCode::InvalidArgument,
              "unknown variance source '" + std::string(text) + "'");
}

VarianceModel select_variance(const GroupedDataset& ds, RegressionMode mode,
                              VarianceSource source) {
  const auto& p = ds.group_sizes();
  const bool singletons = ds.group_count() == ds.size();
  if (mode != RegressionMode::Block || singletons) return classic_variance_model(ds.size());
  if (source == VarianceSource::EmpiricalQ) {
    return exact_variance_model(p, estimate_q_empirical(ds));
  }
  return nonoverlapping_variance_model(p);
}

Verdict classify(const ConfidenceInterval& beta, const ConfidenceInterval& alpha) noexcept {
  const bool slope_ok = beta.contains(1.0);
  const bool intercept_ok = alpha.contains(0.0);
  if (slope_ok && intercept_ok) return Verdict::Equivalent;
  if (slope_ok) return Verdict::ConstantBias;
  if (intercept_ok) return Verdict::ProportionalBias;
  return Verdict::Both;
}

FitResult equivalence_test(const GroupedDataset& ds, RegressionMode mode, double gamma,
                           VarianceSource source, const SlopeOptions& options) {
  const SlopeSet ss = enumerate_slopes(ds, mode, options);
  FitResult r;
  r.estimate.beta_hat = estimate_beta(ss);
  r.estimate.N = ss.N();
  r.estimate.K = ss.K;
  r.estimate.mode = mode;
  r.discarded_identical = ss.discarded_identical;
  r.discarded_minus_one = ss.discarded_minus_one;
  r.variance = select_variance(ds, mode, source);

  const BetaInterval b = beta_ci(ss, r.variance, gamma);
  r.beta_ci = b.ci;
  r.M1 = b.M1;
  r.M2 = b.M2;
  r.C_gamma = b.C_gamma;
  if (!r.beta_ci.contains(r.estimate.beta_hat)) {
    throw Error(ErrorCode::IndexOutOfRange, "slope estimate outside its interval");
  }
  if (!std::isfinite(r.estimate.beta_hat)) {
    throw Error(ErrorCode::NonFiniteValue, "slope estimate is a vertical pair");
  }
  r.estimate.alpha_hat = estimate_alpha(ds, r.estimate.beta_hat);
  if (std::isfinite(r.beta_ci.lower) && std::isfinite(r.beta_ci.upper)) {
    r.alpha_ci = alpha_ci(ds, r.beta_ci);
  } else {
    // Vertical-pair endpoint: the intercept is unbounded on that side.
    r.alpha_ci = {-std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity(), r.beta_ci.level};
  }
  r.verdict = classify(r.beta_ci, r.alpha_ci);
  return r;
}

}  // namespace bpbr
