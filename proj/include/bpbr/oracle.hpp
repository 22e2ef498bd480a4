#pragma once

// Diagnostic validators: Monte Carlo and brute-force checks that the
// closed-form variance model and the sign argument hold on a given design.
// None of this is on the inference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bpbr/dataset.hpp"
#include "bpbr/simulation.hpp"
#include "bpbr/slopes.hpp"
#include "bpbr/variance.hpp"

namespace bpbr::oracle {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased
  double skewness = 0.0;         // m3 / m2^1.5
  double excess_kurtosis = 0.0;  // m4 / m2^2 - 3
  double se_mean = 0.0;
  double se_variance = 0.0;      // delete-one jackknife
  double se_skewness = 0.0;      // sqrt(6/n)
  double se_kurtosis = 0.0;      // sqrt(24/n)
};

Moments sample_moments(std::span<const double> values);

/// Delete-one jackknife standard error of the unbiased sample variance.
double jackknife_se_variance(std::span<const double> values);

/// C~ = P(beta_true) - Q(beta_true) for each generated replicate.
std::vector<double> simulate_C(const Scenario& sc, double beta_true, std::size_t replicates,
                               RegressionMode mode = RegressionMode::Block,
                               const RunOptions& options = {});

/// Requires replicates >= 1e4.
Moments mc_moments_of_C(const Scenario& sc, double beta_true, std::size_t replicates,
                        RegressionMode mode = RegressionMode::Block,
                        const RunOptions& options = {});

/// Monte Carlo q(k, u): draw a random pair from group k and a random member
/// of group u, perturb their true x values with fresh errors, and test strict
/// betweenness. true_x[k] lists the true x of each member of group k.
/// Requires samples >= 1e5.
QMatrix brute_force_q(const std::vector<std::vector<double>>& true_x,
                      ErrorDistribution error_dist, double sigma, std::size_t samples,
                      std::uint64_t seed = 1);

/// Checks, for every cross-group pair, that sign(S - beta) agrees with the
/// sign argument in rescaled coordinates x' = beta x, y' = y - beta x (where
/// the errors on both axes are identically distributed). Vertical and
/// identical pairs are skipped. Requires beta != 0.
bool transform_check(const GroupedDataset& ds, double beta);

}  // namespace bpbr::oracle
