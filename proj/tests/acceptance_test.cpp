// Acceptance suite. One line per criterion; exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "bpbr/dataset.hpp"
#include "bpbr/error.hpp"
#include "bpbr/estimator.hpp"
#include "bpbr/inference.hpp"
#include "bpbr/io.hpp"
#include "bpbr/oracle.hpp"
#include "bpbr/simulation.hpp"
#include "bpbr/slopes.hpp"
#include "bpbr/variance.hpp"

using namespace bpbr;

namespace {

// Tolerances and budgets.
constexpr double kClosedFormRelTol = 1e-12;
constexpr double kClosedFormSeconds = 1.0;
constexpr double kDegenerateSeconds = 5.0;
constexpr double kOracleSe = 3.0;
constexpr double kNonOverlapSeconds = 60.0;
constexpr double kOverlapSeconds = 120.0;
constexpr double kSkewTol = 0.1;
constexpr double kKurtTol = 0.2;
constexpr double kProbTolFloor = 0.02;
constexpr double kProbTolSe = 3.0;
constexpr double kMeanBetaTol = 0.02;
constexpr double kMeanCiTol = 0.01;
constexpr double kInvarianceRelTol = 1e-12;

constexpr std::size_t kTable1Replicates = 2000;
constexpr std::uint64_t kTable1Seed = 42;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

Outcome closed_form() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> group_count(2, 20);
  std::uniform_int_distribution<std::size_t> group_size(1, 50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = group_count(rng);
    std::vector<std::size_t> p(m);
    for (auto& v : p) v = group_size(rng);
    const double exact0 = variance_exact(p, QMatrix::zeros(m));
    const double nonover = variance_nonoverlapping(p);
    worst = std::max(worst, std::abs(exact0 - nonover) / std::abs(nonover));
    if (!rel_close(exact0, nonover, kClosedFormRelTol)) ++bad;

    const std::size_t pe = group_size(rng);
    const std::vector<std::size_t> equal(m, pe);
    QMatrix q(m, QSource::AssumedZero);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t u = 0; u < m; ++u)
        if (k != u) q.set(k, u, 0.25 * unit(rng));
    const double exact_q = variance_exact(equal, q);
    const double eq = variance_equal_groups(m, pe, q.off_diagonal_sum());
    worst = std::max(worst, std::abs(exact_q - eq) / std::abs(eq));
    if (!rel_close(exact_q, eq, kClosedFormRelTol)) ++bad;
  }
  const bool classic_ok = variance_classic(2) == 1.0 &&
                          rel_close(variance_classic(5), 50.0 / 3.0, 1e-15) &&
                          variance_classic(10) == 125.0;
  const double secs = seconds_since(t0);
  return {bad == 0 && classic_ok && secs < kClosedFormSeconds,
          fmt::format("2000 comparisons, {} mismatches, worst rel err {:.2e}, classic n=2,5,10 {}, "
                      "{:.3f}s",
                      bad, worst, classic_ok ? "exact" : "WRONG", secs)};
}

std::string comparable(const FitResult& r) {
  auto j = io::to_json(r);
  j.erase("mode");
  return j.dump();
}

std::string fit_or_error(const GroupedDataset& ds, RegressionMode mode) {
  try {
    return comparable(equivalence_test(ds, mode, 0.05));
  } catch (const Error& e) {
    return std::string("error ") + std::string(e.name());
  }
}

Outcome degenerate_grouping() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size(5, 60);
  std::uniform_real_distribution<double> slope(0.3, 3.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::size_t mismatches = 0, fitted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    const double b = slope(rng);
    std::vector<Row> rows;
    for (int i = 0; i < n; ++i) {
      const double x = 10.0 * noise(rng);
      rows.push_back({x + noise(rng), b * x + noise(rng), "s" + std::to_string(i)});
    }
    const auto ds = build_dataset(rows);
    const auto block = fit_or_error(ds, RegressionMode::Block);
    const auto classic = fit_or_error(ds, RegressionMode::Classic);
    if (block != classic) ++mismatches;
    if (block.rfind("error", 0) != 0) ++fitted;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kDegenerateSeconds,
          fmt::format("200 datasets ({} fitted), {} mismatches, {:.3f}s", fitted, mismatches, secs)};
}

Outcome variance_nonoverlap_oracle() {
  const auto t0 = Clock::now();
  Scenario sc;
  sc.group_sizes = {4, 4, 4};
  sc.true_x = {10.0, 20.0, 30.0};
  sc.sigma = 1.0;  // uniform half-width sqrt(3) < 5: supports disjoint on both axes
  sc.error_dist = ErrorDistribution::Uniform;
  sc.seed = 303;
  const auto mom = oracle::mc_moments_of_C(sc, sc.beta, 200000);
  const double target = 3360.0 / 18.0;
  const double model = variance_nonoverlapping(sc.group_sizes);
  const double z = (mom.variance - target) / mom.se_variance;
  const double secs = seconds_since(t0);
  return {rel_close(model, target, 1e-12) && std::abs(z) <= kOracleSe && secs < kNonOverlapSeconds,
          fmt::format("var {:.3f} vs {:.3f} (jackknife SE {:.3f}, z {:+.2f}), {:.1f}s", mom.variance,
                      target, mom.se_variance, z, secs)};
}

Outcome variance_overlap_oracle() {
  const auto t0 = Clock::now();
  Scenario sc;
  sc.group_sizes = {4, 4};
  sc.true_x = {1.0, 2.0};
  sc.sigma = 0.4;
  sc.error_dist = ErrorDistribution::Normal;
  sc.seed = 404;
  const auto q = oracle::brute_force_q({{1.0, 1.0, 1.0, 1.0}, {2.0, 2.0, 2.0, 2.0}},
                                       ErrorDistribution::Normal, 0.4, 1000000, 405);
  const double target = variance_exact(sc.group_sizes, q);
  const auto mom = oracle::mc_moments_of_C(sc, sc.beta, 200000);
  const double z = (mom.variance - target) / mom.se_variance;
  const double secs = seconds_since(t0);
  return {std::abs(z) <= kOracleSe && secs < kOverlapSeconds,
          fmt::format("q12 {:.4f} q21 {:.4f}, var {:.3f} vs {:.3f} (jackknife SE {:.3f}, z {:+.2f}), "
                      "{:.1f}s",
                      q(0, 1), q(1, 0), mom.variance, target, mom.se_variance, z, secs)};
}

Outcome normality() {
  Scenario sc;
  sc.group_sizes = {20, 20, 20};
  sc.true_x = {10.0, 20.0, 30.0};
  sc.sigma = 1.0;
  sc.error_dist = ErrorDistribution::Uniform;
  sc.seed = 505;
  auto c = oracle::simulate_C(sc, sc.beta, 10000);
  const double sd = std::sqrt(variance_nonoverlapping(sc.group_sizes));
  for (auto& v : c) v /= sd;
  const auto mom = oracle::sample_moments(c);
  return {std::abs(mom.skewness) <= kSkewTol && std::abs(mom.excess_kurtosis) <= kKurtTol,
          fmt::format("skewness {:+.4f}, excess kurtosis {:+.4f}, standardized variance {:.4f}",
                      mom.skewness, mom.excess_kurtosis, mom.variance)};
}

struct Table1Check {
  std::string what;
  double got;
  double want;
  double tol;
};

Outcome table1() {
  const auto t0 = Clock::now();
  const auto all = table1_scenarios(kTable1Replicates, kTable1Seed);
  auto run = [&](const std::string& label) {
    for (const auto& sc : all)
      if (sc.label == label) return run_scenario(sc);
    throw Error(ErrorCode::InvalidArgument, "no cell " + label);
  };
  auto prob_tol = [](double se) { return std::max(kProbTolFloor, kProbTolSe * se); };

  std::vector<Table1Check> checks;
  const auto a = run("beta=1.00 100-100 low");
  const auto& a_b = a.for_mode(RegressionMode::Block);
  checks.push_back({"b=1.0 100-100 block coverage", a_b.coverage, 0.950, prob_tol(a_b.mc_se_coverage)});
  checks.push_back({"b=1.0 100-100 block power", a_b.power, 0.050, prob_tol(a_b.mc_se_power)});
  checks.push_back({"b=1.0 100-100 block mean beta", a_b.mean_beta_hat, 1.001, kMeanBetaTol});
  checks.push_back({"b=1.0 100-100 block mean lower", a_b.mean_ci_lower, 0.923, kMeanCiTol});
  checks.push_back({"b=1.0 100-100 block mean upper", a_b.mean_ci_upper, 1.085, kMeanCiTol});

  const auto b = run("beta=0.20 100-100 low");
  const auto& b_c = b.for_mode(RegressionMode::Classic);
  const auto& b_b = b.for_mode(RegressionMode::Block);
  checks.push_back({"b=0.2 100-100 classic mean beta", b_c.mean_beta_hat, 0.317, kMeanBetaTol});
  checks.push_back({"b=0.2 100-100 classic coverage", b_c.coverage, 0.022, prob_tol(b_c.mc_se_coverage)});
  checks.push_back({"b=0.2 100-100 block mean beta", b_b.mean_beta_hat, 0.202, kMeanBetaTol});
  checks.push_back({"b=0.2 100-100 block coverage", b_b.coverage, 0.948, prob_tol(b_b.mc_se_coverage)});

  const auto c = run("beta=0.80 820-9x20 low");
  const auto& c_c = c.for_mode(RegressionMode::Classic);
  const auto& c_b = c.for_mode(RegressionMode::Block);
  checks.push_back({"b=0.8 820-9x20 classic coverage", c_c.coverage, 0.398, prob_tol(c_c.mc_se_coverage)});
  checks.push_back({"b=0.8 820-9x20 block coverage", c_b.coverage, 0.953, prob_tol(c_b.mc_se_coverage)});
  checks.push_back({"b=0.8 820-9x20 classic power", c_c.power, 1.0, prob_tol(c_c.mc_se_power)});
  checks.push_back({"b=0.8 820-9x20 block power", c_b.power, 1.0, prob_tol(c_b.mc_se_power)});

  const auto d = run("beta=0.98 820-9x20 low");
  const auto& d_c = d.for_mode(RegressionMode::Classic);
  const auto& d_b = d.for_mode(RegressionMode::Block);
  checks.push_back({"b=0.98 820-9x20 classic power", d_c.power, 0.838, prob_tol(d_c.mc_se_power)});
  checks.push_back({"b=0.98 820-9x20 block power", d_b.power, 0.994, prob_tol(d_b.mc_se_power)});

  bool pass = true;
  std::string detail;
  for (const auto& ch : checks) {
    const bool ok = std::abs(ch.got - ch.want) <= ch.tol;
    pass = pass && ok;
    detail += fmt::format("\n    {} {}: {:.4f} vs {:.3f} (tol {:.4f})", ok ? "ok  " : "FAIL", ch.what,
                          ch.got, ch.want, ch.tol);
  }
  return {pass, fmt::format("{} reps per cell, {:.1f}s{}", kTable1Replicates, seconds_since(t0),
                            detail)};
}

// Data on a 1/8 grid with small magnitudes, so that translations by grid
// values and power-of-two scalings are exact in floating point.
std::vector<Row> dyadic_rows(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> groups(2, 8), size(1, 6), tick(-400, 400), slope(1, 24);
  const int m = groups(rng);
  const double b = slope(rng) / 8.0;
  std::vector<Row> rows;
  for (int k = 0; k < m; ++k) {
    const int p = size(rng);
    for (int i = 0; i < p; ++i) {
      const double x = 10.0 * k + tick(rng) / 64.0;
      const double y = std::round(8.0 * b * x) / 8.0 + tick(rng) / 64.0;
      rows.push_back({x, y, "g" + std::to_string(k)});
    }
  }
  return rows;
}

Outcome invariance() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> shift(-800, 800), power(-4, 4);
  std::size_t translate_bad = 0, scale_bad = 0, permute_bad = 0, beta_bad = 0, alpha_bad = 0;
  std::size_t skipped = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = dyadic_rows(rng);
    const auto ds = build_dataset(rows);
    const double a = shift(rng) / 8.0, c = shift(rng) / 8.0;
    const double s = std::ldexp(1.0, power(rng));

    auto translated = rows, scaled = rows, permuted = rows;
    for (auto& r : translated) r.x += a, r.y += c;
    for (auto& r : scaled) r.x *= s, r.y *= s;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const auto ds_t = build_dataset(translated);
    const auto ds_s = build_dataset(scaled);
    const auto ds_p = build_dataset(permuted);

    for (auto mode : {RegressionMode::Block, RegressionMode::Classic, RegressionMode::TheilSen}) {
      const auto base = enumerate_slopes(ds, mode);
      if (enumerate_slopes(ds_t, mode) != base) ++translate_bad;
      if (enumerate_slopes(ds_s, mode) != base) ++scale_bad;
      if (enumerate_slopes(ds_p, mode) != base) ++permute_bad;

      PointEstimate f;
      try {
        f = fit(ds, mode);
      } catch (const Error&) {
        ++skipped;
        continue;
      }
      const auto ft = fit(ds_t, mode), fs = fit(ds_s, mode), fp = fit(ds_p, mode);
      if (ft.beta_hat != f.beta_hat || fs.beta_hat != f.beta_hat || fp.beta_hat != f.beta_hat)
        ++beta_bad;
      const double alpha_t = f.alpha_hat + c - a * f.beta_hat;
      const double scale_t = std::max({std::abs(f.alpha_hat), std::abs(c), std::abs(a * f.beta_hat)});
      if (std::abs(ft.alpha_hat - alpha_t) > kInvarianceRelTol * std::max(1.0, scale_t) ||
          fs.alpha_hat != s * f.alpha_hat || fp.alpha_hat != f.alpha_hat)
        ++alpha_bad;
    }
  }
  const std::size_t bad = translate_bad + scale_bad + permute_bad + beta_bad + alpha_bad;
  return {bad == 0,
          fmt::format("500 cases x 3 modes: slope-set translate/scale/permute failures {}/{}/{}, "
                      "beta {} alpha {} ({} fits skipped as unfittable)",
                      translate_bad, scale_bad, permute_bad, beta_bad, alpha_bad, skipped)};
}

std::string suite_bytes(unsigned threads) {
  const auto rows = table1_suite(100, kTable1Seed, RunOptions{threads});
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows) j.push_back(io::to_json(r));
  return io::format_table1_text(rows) + j.dump();
}

Outcome determinism() {
  const auto t0 = Clock::now();
  const auto one = suite_bytes(1);
  const auto again = suite_bytes(1);
  const auto four = suite_bytes(4);
  const auto seven = suite_bytes(7);
  const bool pass = one == again && one == four && one == seven;
  return {pass, fmt::format("100-replicate suite, {} bytes, rerun {} / 4 threads {} / 7 threads {}, "
                            "{:.1f}s",
                            one.size(), one == again ? "same" : "DIFFERENT",
                            one == four ? "same" : "DIFFERENT", one == seven ? "same" : "DIFFERENT",
                            seconds_since(t0))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 closed-form consistency", closed_form},
      {"2 degenerate grouping equals classic", degenerate_grouping},
      {"3 variance oracle, separated groups", variance_nonoverlap_oracle},
      {"4 variance oracle, overlapping groups", variance_overlap_oracle},
      {"5 normality of standardized C", normality},
      {"6 published simulation table", table1},
      {"7 invariance suite", invariance},
      {"8 determinism across runs and threads", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    if (!o.pass) ++failed;
    fmt::print("[{}] {}: {}\n", o.pass ? "PASS" : "FAIL", name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
