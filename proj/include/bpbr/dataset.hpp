#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bpbr {

/// One paired reading: x from method 1, y from method 2, and the dense index
/// of the sample (group) it was taken from.
struct Measurement {
  double x = 0.0;
  double y = 0.0;
  std::size_t group = 0;

  bool operator==(const Measurement&) const = default;
};

/// Raw input row with an opaque group label.
struct Row {
  double x = 0.0;
  double y = 0.0;
  std::string group;
};

/// Repeated-measurement data: n points partitioned into m groups.
///
/// Group labels are mapped to dense indices 0..m-1 in order of first
/// appearance. Points keep their input order. Immutable once built.
class GroupedDataset {
 public:
  /// Throws EmptyInput or NonFiniteValue (row index in the message).
  static GroupedDataset from_rows(std::span<const Row> rows);

  /// Points already carrying dense group indices; labels become "0".."m-1".
  static GroupedDataset from_measurements(std::vector<Measurement> points);

  const std::vector<Measurement>& points() const noexcept { return points_; }
  const std::vector<std::size_t>& group_sizes() const noexcept { return group_sizes_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t group_count() const noexcept { return group_sizes_.size(); }

  /// x values of one group, in input order.
  std::vector<double> group_x(std::size_t group) const;

  bool operator==(const GroupedDataset&) const = default;

 private:
  GroupedDataset() = default;
  void validate_and_count();

  std::vector<Measurement> points_;
  std::vector<std::size_t> group_sizes_;
  std::vector<std::string> labels_;
};

GroupedDataset build_dataset(std::span<const Row> rows);

/// Empirical stand-in for the "strictly separated groups" assumption.
/// offending_pairs_x / _y hold canonical (k < u) dense index pairs.
struct OverlapReport {
  bool nonoverlapping_x = true;
  bool nonoverlapping_y = true;
  std::vector<std::pair<std::size_t, std::size_t>> offending_pairs_x;
  std::vector<std::pair<std::size_t, std::size_t>> offending_pairs_y;
};

OverlapReport check_overlap(const GroupedDataset& ds);

}  // namespace bpbr
