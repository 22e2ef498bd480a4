#include "bpbr/oracle.hpp"

#include <cmath>
#include <random>

#include "bpbr/error.hpp"
#include "bpbr/parallel.hpp"

namespace bpbr::oracle {

double jackknife_se_variance(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "jackknife needs >= 3 values");
  const double nd = static_cast<double>(n);
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= nd;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);

  // Leave-one-out variance: (ss - n/(n-1) d_i^2) / (n - 2).
  std::vector<double> loo(n);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    loo[i] = (ss - nd / (nd - 1.0) * d * d) / (nd - 2.0);
    loo_mean += loo[i];
  }
  loo_mean /= nd;
  double acc = 0.0;
  for (double v : loo) acc += (v - loo_mean) * (v - loo_mean);
  return std::sqrt((nd - 1.0) / nd * acc);
}

Moments sample_moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "moments need >= 3 values");
  const double nd = static_cast<double>(n);
  Moments m;
  m.count = n;
  for (double v : values) m.mean += v;
  m.mean /= nd;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m.variance = m2 / (nd - 1.0);
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  m.se_mean = std::sqrt(m.variance / nd);
  m.se_variance = jackknife_se_variance(values);
  m.se_skewness = std::sqrt(6.0 / nd);
  m.se_kurtosis = std::sqrt(24.0 / nd);
  return m;
}

std::vector<double> simulate_C(const Scenario& sc, double beta_true, std::size_t replicates,
                               RegressionMode mode, const RunOptions& options) {
  std::vector<double> c(replicates);
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const GroupedDataset ds = generate_dataset(sc, r);
    c[r] = static_cast<double>(count_signs(enumerate_slopes(ds, mode), beta_true).C_tilde);
  });
  return c;
}

Moments mc_moments_of_C(const Scenario& sc, double beta_true, std::size_t replicates,
                        RegressionMode mode, const RunOptions& options) {
  if (replicates < 10000) {
    throw Error(ErrorCode::InvalidArgument, "moment oracle needs >= 1e4 replicates");
  }
  const std::vector<double> c = simulate_C(sc, beta_true, replicates, mode, options);
  return sample_moments(c);
}

QMatrix brute_force_q(const std::vector<std::vector<double>>& true_x,
                      ErrorDistribution error_dist, double sigma, std::size_t samples,
                      std::uint64_t seed) {
  if (samples < 100000) {
    throw Error(ErrorCode::InvalidArgument, "q oracle needs >= 1e5 samples");
  }
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be >= 0");
  const std::size_t m = true_x.size();
  QMatrix q(m, QSource::MonteCarlo);
  const double half_width = sigma * std::sqrt(3.0);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t pk = true_x[k].size();
    if (pk < 2) continue;
    for (std::size_t u = 0; u < m; ++u) {
      if (u == k || true_x[u].empty()) continue;
      std::mt19937_64 engine(mix_seed(seed, k * m + u));
      std::normal_distribution<double> normal(0.0, sigma);
      std::uniform_real_distribution<double> uniform(-half_width, half_width);
      std::uniform_int_distribution<std::size_t> pick_k(0, pk - 1);
      std::uniform_int_distribution<std::size_t> pick_u(0, true_x[u].size() - 1);
      auto err = [&] {
        return error_dist == ErrorDistribution::Normal ? normal(engine) : uniform(engine);
      };
      std::size_t hits = 0;
      for (std::size_t s = 0; s < samples; ++s) {
        const std::size_t i = pick_k(engine);
        std::size_t j = pick_k(engine);
        while (j == i) j = pick_k(engine);
        const double a = true_x[k][i] + err();
        const double b = true_x[k][j] + err();
        const double v = true_x[u][pick_u(engine)] + err();
        if (std::min(a, b) < v && v < std::max(a, b)) ++hits;
      }
      q.set(k, u, static_cast<double>(hits) / static_cast<double>(samples));
    }
  }
  return q;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

bool transform_check(const GroupedDataset& ds, double beta) {
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw Error(ErrorCode::InvalidArgument, "beta must be finite and non-zero");
  }
  const auto& pts = ds.points();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      if (pts[a].group == pts[b].group) continue;
      const double dx = pts[a].x - pts[b].x;
      const double dy = pts[a].y - pts[b].y;
      if (dx == 0.0) continue;
      const int direct = sign(dy / dx - beta);

      const double dx_t = beta * pts[a].x - beta * pts[b].x;
      const double dy_t = (pts[a].y - beta * pts[a].x) - (pts[b].y - beta * pts[b].x);
      // Transformed slope dy_t / dx_t = S / beta - 1; its sign is that of
      // S - beta up to the sign of beta.
      const int transformed = sign(dy_t) * sign(dx_t) * sign(beta);
      if (direct != transformed) return false;
    }
  }
  return true;
}

}  // namespace bpbr::oracle
