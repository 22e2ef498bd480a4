#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpbr/dataset.hpp"
#include "bpbr/estimator.hpp"
#include "bpbr/inference.hpp"
#include "bpbr/simulation.hpp"
#include "bpbr/variance.hpp"

namespace bpbr::io {

/// CSV with header naming the columns x, y and group (any order), comma
/// separated, '.' decimal point. Throws ParseError naming the 1-based line,
/// or NonFiniteValue.
GroupedDataset read_csv(std::istream& in);
GroupedDataset read_csv_file(const std::string& path);

/// Values are written with 17 significant digits, so reading back is exact.
void write_csv(std::ostream& out, const GroupedDataset& ds);

/// key = value lines; '#' starts a comment. Keys: label, group_sizes, beta,
/// alpha, sigma, dist, replicates, seed, gamma, modes, variance, true_x.
/// Lists are comma separated; "9x20" expands to nine groups of 20.
Scenario parse_scenario(std::istream& in);

nlohmann::json to_json(const ConfidenceInterval& ci);
nlohmann::json to_json(const VarianceModel& v);
nlohmann::json to_json(const QMatrix& q);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const OverlapReport& r, const GroupedDataset& ds);
nlohmann::json to_json(const ModeSummary& s);
nlohmann::json to_json(const SimSummary& s);

std::string format_fit_text(const FitResult& r);
std::string format_summary_text(const SimSummary& s);

/// One row per scenario with classic and block columns side by side:
/// mean slope, mean interval, P(beta in I), P(1 not in I).
std::string format_table1_text(const std::vector<SimSummary>& rows);

struct PlotLine {
  std::string name;
  double intercept = 0.0;
  double slope = 0.0;
};

/// "# points" section (x,y,group) followed by a "# lines" section
/// (line,intercept,slope).
void write_plot_data(std::ostream& out, const GroupedDataset& ds,
                     const std::vector<PlotLine>& lines);

}  // namespace bpbr::io
