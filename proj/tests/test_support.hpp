#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bpbr/dataset.hpp"

namespace bpbr::testing {

inline GroupedDataset make(std::initializer_list<Row> rows) {
  std::vector<Row> v(rows);
  return build_dataset(v);
}

/// Random grouped dataset with m groups of random size in [1, max_group].
inline std::vector<Row> random_rows(std::mt19937_64& rng, std::size_t m, std::size_t max_group,
                                    double spread = 3.0) {
  std::uniform_int_distribution<std::size_t> size(1, max_group);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> slope(-2.0, 2.0);
  const double b = slope(rng);
  std::vector<Row> rows;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t p = size(rng);
    for (std::size_t i = 0; i < p; ++i) {
      const double x = spread * static_cast<double>(k) + noise(rng);
      rows.push_back({x, b * x + noise(rng), "g" + std::to_string(k)});
    }
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

}  // namespace bpbr::testing
