#include "bpbr/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "bpbr/error.hpp"
#include "bpbr/estimator.hpp"
#include "bpbr/parallel.hpp"
#include "bpbr/variance.hpp"

namespace bpbr {

std::string_view distribution_name(ErrorDistribution d) noexcept {
  return d == ErrorDistribution::Normal ? "normal" : "uniform";
}

ErrorDistribution parse_distribution(std::string_view text) {
  if (text == "normal") return ErrorDistribution::Normal;
  if (text == "uniform") return ErrorDistribution::Uniform;
  throw Error(ErrorCode::InvalidArgument, "unknown distribution '" + std::string(text) + "'");
}

void Scenario::validate() const {
  if (group_sizes.empty()) throw Error(ErrorCode::InvalidArgument, "group_sizes is empty");
  for (std::size_t p : group_sizes) {
    if (p == 0) throw Error(ErrorCode::InvalidArgument, "group size 0");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must be > 0");
  }
  if (replicates < 1) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0,1)");
  }
  if (!std::isfinite(beta) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::InvalidArgument, "beta and alpha must be finite");
  }
  if (!true_x.empty() && true_x.size() != group_sizes.size()) {
    throw Error(ErrorCode::InvalidArgument, "true_x needs one value per group");
  }
  if (modes.empty()) throw Error(ErrorCode::InvalidArgument, "no modes");
}

double Scenario::true_x_of(std::size_t group) const {
  return true_x.empty() ? static_cast<double>(group + 1) : true_x.at(group);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finaliser over the combined words.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t replicate) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replicate),
                    static_cast<std::uint32_t>(replicate >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

GroupedDataset generate_dataset(const Scenario& sc, std::uint64_t replicate_index) {
  sc.validate();
  auto engine = replicate_engine(sc.seed, replicate_index);
  std::normal_distribution<double> normal(0.0, sc.sigma);
  const double half_width = sc.sigma * std::sqrt(3.0);
  std::uniform_real_distribution<double> uniform(-half_width, half_width);
  auto draw = [&] {
    return sc.error_dist == ErrorDistribution::Normal ? normal(engine) : uniform(engine);
  };

  std::size_t n = 0;
  for (std::size_t p : sc.group_sizes) n += p;
  std::vector<Measurement> points;
  points.reserve(n);
  for (std::size_t k = 0; k < sc.group_sizes.size(); ++k) {
    const double tx = sc.true_x_of(k);
    const double ty = sc.alpha + sc.beta * tx;
    for (std::size_t i = 0; i < sc.group_sizes[k]; ++i) {
      const double ex = draw();
      const double ey = draw();
      points.push_back({tx + ex, ty + ey, k});
    }
  }
  return GroupedDataset::from_measurements(std::move(points));
}

const ModeSummary& SimSummary::for_mode(RegressionMode mode) const {
  for (const auto& m : modes) {
    if (m.mode == mode) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "mode not simulated: " + std::string(mode_name(mode)));
}

ReplicateOutcome evaluate_replicate(const GroupedDataset& ds, RegressionMode mode,
                                    const Scenario& sc, std::vector<double>& scratch) {
  ReplicateOutcome out;
  try {
    scratch.clear();
    const SlopeTally tally = collect_slopes(ds, mode, {}, scratch);
    const VarianceModel variance = select_variance(ds, mode, sc.variance_source);
    const MedianRanks median = shifted_median_ranks(tally.N, tally.K);
    const CiRanks ci = beta_ci_ranks(tally.N, tally.K, variance.value, sc.gamma);
    const std::size_t ranks[] = {median.lower, median.upper, ci.lower_rank, ci.upper_rank};
    const std::vector<double> v = select_order_statistics(scratch, ranks);
    out.beta_hat = median.lower == median.upper ? v[0] : 0.5 * (v[0] + v[1]);
    out.ci_lower = v[2];
    out.ci_upper = v[3];
    if (std::isfinite(out.ci_lower) && std::isfinite(out.ci_upper)) {
      const ConfidenceInterval a = alpha_ci(ds, {out.ci_lower, out.ci_upper, 1.0 - sc.gamma});
      out.alpha_covered = a.contains(sc.alpha);
    } else {
      out.alpha_covered = true;
    }
    out.ok = std::isfinite(out.beta_hat);
  } catch (const Error&) {
    out.ok = false;
  }
  return out;
}

SimSummary run_scenario(const Scenario& sc, const RunOptions& options) {
  sc.validate();
  const std::size_t modes = sc.modes.size();
  std::vector<ReplicateOutcome> outcomes(sc.replicates * modes);

  parallel_for(sc.replicates, options.threads, [&](std::size_t r) {
    thread_local std::vector<double> scratch;
    const GroupedDataset ds = generate_dataset(sc, r);
    for (std::size_t j = 0; j < modes; ++j) {
      outcomes[r * modes + j] = evaluate_replicate(ds, sc.modes[j], sc, scratch);
    }
  });

  // Sequential reduction in replicate order: independent of thread count.
  SimSummary summary;
  summary.scenario = sc;
  for (std::size_t j = 0; j < modes; ++j) {
    ModeSummary ms;
    ms.mode = sc.modes[j];
    double sum_beta = 0.0, sum_beta2 = 0.0, sum_lo = 0.0, sum_hi = 0.0;
    std::size_t covered = 0, rejected = 0, alpha_covered = 0;
    for (std::size_t r = 0; r < sc.replicates; ++r) {
      const ReplicateOutcome& o = outcomes[r * modes + j];
      if (!o.ok) {
        ++ms.failures;
        continue;
      }
      ++ms.replicates;
      sum_beta += o.beta_hat;
      sum_beta2 += o.beta_hat * o.beta_hat;
      sum_lo += o.ci_lower;
      sum_hi += o.ci_upper;
      if (o.ci_lower <= sc.beta && sc.beta <= o.ci_upper) ++covered;
      if (!(o.ci_lower <= 1.0 && 1.0 <= o.ci_upper)) ++rejected;
      if (o.alpha_covered) ++alpha_covered;
    }
    if (ms.replicates == 0) {
      throw Error(ErrorCode::AllReplicatesFailed,
                  std::string(mode_name(ms.mode)) + " in scenario '" + sc.label + "'");
    }
    const double r = static_cast<double>(ms.replicates);
    ms.mean_beta_hat = sum_beta / r;
    ms.sd_beta_hat = ms.replicates > 1
                         ? std::sqrt(std::max(0.0, (sum_beta2 - r * ms.mean_beta_hat *
                                                                    ms.mean_beta_hat) /
                                                       (r - 1.0)))
                         : 0.0;
    ms.mean_ci_lower = sum_lo / r;
    ms.mean_ci_upper = sum_hi / r;
    ms.coverage = static_cast<double>(covered) / r;
    ms.power = static_cast<double>(rejected) / r;
    ms.alpha_coverage = static_cast<double>(alpha_covered) / r;
    ms.mc_se_coverage = std::sqrt(ms.coverage * (1.0 - ms.coverage) / r);
    ms.mc_se_power = std::sqrt(ms.power * (1.0 - ms.power) / r);
    summary.modes.push_back(ms);
  }
  return summary;
}

std::vector<Scenario> table1_scenarios(std::size_t replicates, std::uint64_t seed) {
  struct Config {
    const char* name;
    std::vector<std::size_t> sizes;
  };
  std::vector<std::size_t> big_and_small{820};
  big_and_small.insert(big_and_small.end(), 9, 20);
  const std::vector<Config> configs{{"100-100", {100, 100}},
                                    {"180-20", {180, 20}},
                                    {"10x100", std::vector<std::size_t>(10, 100)},
                                    {"820-9x20", big_and_small}};
  const double betas[] = {1.0, 0.98, 0.8, 0.2};
  const std::pair<const char*, double> overlaps[] = {{"low", 0.2}, {"high", 0.4}};

  std::vector<Scenario> out;
  for (double beta : betas) {
    for (const auto& cfg : configs) {
      for (const auto& [overlap, sigma] : overlaps) {
        Scenario sc;
        char beta_text[16];
        std::snprintf(beta_text, sizeof beta_text, "%.2f", beta);
        sc.label = std::string("beta=") + beta_text + " " + cfg.name + " " + overlap;
        sc.group_sizes = cfg.sizes;
        sc.beta = beta;
        sc.sigma = sigma;
        sc.replicates = replicates;
        sc.seed = mix_seed(seed, out.size());
        sc.modes = {RegressionMode::Classic, RegressionMode::Block};
        out.push_back(std::move(sc));
      }
    }
  }
  return out;
}

std::vector<SimSummary> table1_suite(std::size_t replicates, std::uint64_t seed,
                                     const RunOptions& options) {
  if (replicates < 100) throw Error(ErrorCode::InvalidArgument, "table1 needs >= 100 replicates");
  std::vector<SimSummary> out;
  for (const auto& sc : table1_scenarios(replicates, seed)) {
    out.push_back(run_scenario(sc, options));
  }
  return out;
}

}  // namespace bpbr
