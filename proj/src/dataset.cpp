#include "bpbr/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "bpbr/error.hpp"

namespace bpbr {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::BlockModeNeedsTwoGroups: return "BlockModeNeedsTwoGroups";
    case ErrorCode::NoSlopesRemaining: return "NoSlopesRemaining";
    case ErrorCode::OffsetOutOfRange: return "OffsetOutOfRange";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::AllReplicatesFailed: return "AllReplicatesFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_data_error(ErrorCode code) noexcept {
  return code == ErrorCode::EmptyInput || code == ErrorCode::NonFiniteValue ||
         code == ErrorCode::ParseError || code == ErrorCode::InvalidArgument;
}

GroupedDataset GroupedDataset::from_rows(std::span<const Row> rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows");
  GroupedDataset ds;
  ds.points_.reserve(rows.size());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (!std::isfinite(row.x) || !std::isfinite(row.y)) {
      throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(r));
    }
    auto [it, inserted] = index.try_emplace(row.group, ds.labels_.size());
    if (inserted) ds.labels_.push_back(row.group);
    ds.points_.push_back({row.x, row.y, it->second});
  }
  ds.validate_and_count();
  return ds;
}

GroupedDataset GroupedDataset::from_measurements(std::vector<Measurement> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyInput, "no points");
  GroupedDataset ds;
  ds.points_ = std::move(points);
  for (std::size_t r = 0; r < ds.points_.size(); ++r) {
    if (!std::isfinite(ds.points_[r].x) || !std::isfinite(ds.points_[r].y)) {
      throw Error(ErrorCode::NonFiniteValue, "row " + std::to_string(r));
    }
  }
  std::size_t m = 0;
  for (const auto& p : ds.points_) m = std::max(m, p.group + 1);
  ds.labels_.reserve(m);
  for (std::size_t k = 0; k < m; ++k) ds.labels_.push_back(std::to_string(k));
  ds.validate_and_count();
  return ds;
}

void GroupedDataset::validate_and_count() {
  group_sizes_.assign(labels_.size(), 0);
  for (const auto& p : points_) ++group_sizes_.at(p.group);
  for (std::size_t k = 0; k < group_sizes_.size(); ++k) {
    if (group_sizes_[k] == 0) {
      throw Error(ErrorCode::InvalidArgument,
                  "group index " + std::to_string(k) + " has no points");
    }
  }
}

std::vector<double> GroupedDataset::group_x(std::size_t group) const {
  std::vector<double> xs;
  xs.reserve(group_sizes_.at(group));
  for (const auto& p : points_) {
    if (p.group == group) xs.push_back(p.x);
  }
  return xs;
}

GroupedDataset build_dataset(std::span<const Row> rows) {
  return GroupedDataset::from_rows(rows);
}

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Closed ranges: touching endpoints count as overlap (the separation
// predicate is strict).
bool disjoint(const Range& a, const Range& b) { return a.hi < b.lo || b.hi < a.lo; }

}  // namespace

OverlapReport check_overlap(const GroupedDataset& ds) {
  const std::size_t m = ds.group_count();
  std::vector<Range> xr(m), yr(m);
  for (const auto& p : ds.points()) {
    xr[p.group].add(p.x);
    yr[p.group].add(p.y);
  }
  OverlapReport report;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t u = k + 1; u < m; ++u) {
      if (!disjoint(xr[k], xr[u])) report.offending_pairs_x.emplace_back(k, u);
      if (!disjoint(yr[k], yr[u])) report.offending_pairs_y.emplace_back(k, u);
    }
  }
  report.nonoverlapping_x = report.offending_pairs_x.empty();
  report.nonoverlapping_y = report.offending_pairs_y.empty();
  return report;
}

}  // namespace bpbr
