#include "bpbr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "bpbr/error.hpp"

namespace bpbr::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

GroupedDataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int cx = -1, cy = -1, cg = -1;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    const auto header = split(line, ',');
    columns = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == "x") cx = static_cast<int>(i);
      else if (header[i] == "y") cy = static_cast<int>(i);
      else if (header[i] == "group") cg = static_cast<int>(i);
    }
    if (cx < 0 || cy < 0 || cg < 0) parse_fail(line_no, "header must name columns x,y,group");
    break;
  }
  if (columns == 0) throw Error(ErrorCode::EmptyInput, "no header");

  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      parse_fail(line_no, "expected " + std::to_string(columns) + " fields, got " +
                              std::to_string(fields.size()));
    }
    Row row;
    if (!parse_double(fields[cx], row.x)) parse_fail(line_no, "bad x '" + fields[cx] + "'");
    if (!parse_double(fields[cy], row.y)) parse_fail(line_no, "bad y '" + fields[cy] + "'");
    row.group = fields[cg];
    if (!std::isfinite(row.x) || !std::isfinite(row.y)) {
      throw Error(ErrorCode::NonFiniteValue, "line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return build_dataset(rows);
}

GroupedDataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const GroupedDataset& ds) {
  out << "x,y,group\n";
  for (const auto& p : ds.points()) {
    out << fmt::format("{:.17g},{:.17g},{}\n", p.x, p.y, ds.labels()[p.group]);
  }
}

namespace {

std::vector<std::size_t> parse_sizes(const std::string& value, std::size_t line) {
  std::vector<std::size_t> sizes;
  for (const auto& item : split(value, ',')) {
    std::size_t count = 1;
    std::string size_text = item;
    if (const auto x = item.find('x'); x != std::string::npos) {
      count = std::stoul(item.substr(0, x));
      size_text = item.substr(x + 1);
    }
    std::size_t size = 0;
    const auto [ptr, ec] =
        std::from_chars(size_text.data(), size_text.data() + size_text.size(), size);
    if (ec != std::errc() || ptr != size_text.data() + size_text.size() || size == 0) {
      parse_fail(line, "bad group size '" + item + "'");
    }
    sizes.insert(sizes.end(), count, size);
  }
  return sizes;
}

double parse_number(const std::string& value, std::size_t line) {
  double v = 0.0;
  if (!parse_double(value, v)) parse_fail(line, "bad number '" + value + "'");
  return v;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "label") sc.label = value;
      else if (key == "group_sizes") sc.group_sizes = parse_sizes(value, line_no);
      else if (key == "beta") sc.beta = parse_number(value, line_no);
      else if (key == "alpha") sc.alpha = parse_number(value, line_no);
      else if (key == "sigma") sc.sigma = parse_number(value, line_no);
      else if (key == "dist") sc.error_dist = parse_distribution(value);
      else if (key == "replicates") sc.replicates = std::stoull(value);
      else if (key == "seed") sc.seed = std::stoull(value);
      else if (key == "gamma") sc.gamma = parse_number(value, line_no);
      else if (key == "variance") sc.variance_source = parse_variance_source(value);
      else if (key == "modes") {
        sc.modes.clear();
        for (const auto& m : split(value, ',')) sc.modes.push_back(parse_mode(m));
      } else if (key == "true_x") {
        sc.true_x.clear();
        for (const auto& v : split(value, ',')) sc.true_x.push_back(parse_number(v, line_no));
      } else {
        parse_fail(line_no, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      parse_fail(line_no, e.what());
    } catch (const std::logic_error&) {
      parse_fail(line_no, "bad value for '" + key + "'");
    }
  }
  try {
    sc.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return sc;
}

nlohmann::json to_json(const ConfidenceInterval& ci) {
  return {{"lower", ci.lower}, {"upper", ci.upper}, {"level", ci.level}};
}

nlohmann::json to_json(const QMatrix& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < q.size(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t u = 0; u < q.size(); ++u) row.push_back(k == u ? 0.0 : q(k, u));
    rows.push_back(std::move(row));
  }
  return {{"source", q_source_name(q.source())}, {"q", std::move(rows)}};
}

nlohmann::json to_json(const VarianceModel& v) {
  nlohmann::json j{{"kind", variance_kind_name(v.kind)},
                   {"value", v.value},
                   {"sigma", std::sqrt(v.value)},
                   {"group_sizes", v.group_sizes}};
  if (v.q) j["q"] = to_json(*v.q);
  return j;
}

nlohmann::json to_json(const FitResult& r) {
  return {{"mode", mode_name(r.estimate.mode)},
          {"beta_hat", r.estimate.beta_hat},
          {"alpha_hat", r.estimate.alpha_hat},
          {"N", r.estimate.N},
          {"K", r.estimate.K},
          {"discarded_identical", r.discarded_identical},
          {"discarded_minus_one", r.discarded_minus_one},
          {"beta_ci", to_json(r.beta_ci)},
          {"alpha_ci", to_json(r.alpha_ci)},
          {"M1", r.M1},
          {"M2", r.M2},
          {"C_gamma", r.C_gamma},
          {"variance", to_json(r.variance)},
          {"verdict", verdict_name(r.verdict)}};
}

nlohmann::json to_json(const OverlapReport& r, const GroupedDataset& ds) {
  auto pairs = [&](const auto& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [k, u] : list) out.push_back({ds.labels()[k], ds.labels()[u]});
    return out;
  };
  return {{"nonoverlapping_x", r.nonoverlapping_x},
          {"nonoverlapping_y", r.nonoverlapping_y},
          {"offending_pairs_x", pairs(r.offending_pairs_x)},
          {"offending_pairs_y", pairs(r.offending_pairs_y)}};
}

nlohmann::json to_json(const ModeSummary& s) {
  return {{"mode", mode_name(s.mode)},
          {"replicates", s.replicates},
          {"failures", s.failures},
          {"mean_beta_hat", s.mean_beta_hat},
          {"sd_beta_hat", s.sd_beta_hat},
          {"mean_ci_lower", s.mean_ci_lower},
          {"mean_ci_upper", s.mean_ci_upper},
          {"coverage", s.coverage},
          {"power", s.power},
          {"mc_se_coverage", s.mc_se_coverage},
          {"mc_se_power", s.mc_se_power},
          {"alpha_coverage", s.alpha_coverage}};
}

nlohmann::json to_json(const SimSummary& s) {
  const Scenario& sc = s.scenario;
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : s.modes) modes.push_back(to_json(m));
  return {{"label", sc.label},
          {"scenario",
           {{"group_sizes", sc.group_sizes},
            {"beta", sc.beta},
            {"alpha", sc.alpha},
            {"sigma", sc.sigma},
            {"dist", distribution_name(sc.error_dist)},
            {"replicates", sc.replicates},
            {"seed", sc.seed},
            {"gamma", sc.gamma},
            {"variance", variance_source_name(sc.variance_source)}}},
          {"modes", std::move(modes)}};
}

std::string format_fit_text(const FitResult& r) {
  std::string s;
  s += fmt::format("mode            {}\n", mode_name(r.estimate.mode));
  s += fmt::format("slope           {:.6g}  [{:.6g}, {:.6g}]\n", r.estimate.beta_hat,
                   r.beta_ci.lower, r.beta_ci.upper);
  s += fmt::format("intercept       {:.6g}  [{:.6g}, {:.6g}]\n", r.estimate.alpha_hat,
                   r.alpha_ci.lower, r.alpha_ci.upper);
  s += fmt::format("level           {:.4g}\n", r.beta_ci.level);
  s += fmt::format("slopes N        {}  (K={}, identical={}, at offset={})\n", r.estimate.N,
                   r.estimate.K, r.discarded_identical, r.discarded_minus_one);
  s += fmt::format("ranks           M1={} M2={} C_gamma={:.6g}\n", r.M1, r.M2, r.C_gamma);
  s += fmt::format("variance        {} = {:.6g}\n", variance_kind_name(r.variance.kind),
                   r.variance.value);
  s += fmt::format("verdict         {}\n", verdict_name(r.verdict));
  return s;
}

std::string format_summary_text(const SimSummary& s) {
  std::string out = fmt::format("scenario {}\n", s.scenario.label.empty() ? "-" : s.scenario.label);
  out += fmt::format("{:<10} {:>8} {:>9} {:>20} {:>8} {:>8} {:>8} {:>6}\n", "mode", "reps",
                     "mean b", "mean I", "P(b in)", "P(1 out)", "MC-SE", "fail");
  for (const auto& m : s.modes) {
    out += fmt::format("{:<10} {:>8} {:>9.4f} {:>20} {:>8.3f} {:>8.3f} {:>8.4f} {:>6}\n",
                       mode_name(m.mode), m.replicates, m.mean_beta_hat,
                       fmt::format("[{:.3f},{:.3f}]", m.mean_ci_lower, m.mean_ci_upper),
                       m.coverage, m.power, m.mc_se_coverage, m.failures);
  }
  return out;
}

std::string format_table1_text(const std::vector<SimSummary>& rows) {
  std::string out = fmt::format("{:<6} {:<9} {:<7} {:>7} {:>7}  {:>15} {:>15}  {:>6} {:>6}  {:>6} {:>6}\n",
                                "slope", "groups", "overlap", "b cPBR", "b BPBR", "I cPBR",
                                "I BPBR", "cov c", "cov b", "pow c", "pow b");
  for (const auto& row : rows) {
    const auto& label = row.scenario.label;
    // Label is "beta=<b> <groups> <overlap>".
    const auto parts = split(label, ' ');
    const std::string slope = parts.size() > 0 ? parts[0].substr(parts[0].find('=') + 1) : "";
    const std::string groups = parts.size() > 1 ? parts[1] : "";
    const std::string overlap = parts.size() > 2 ? parts[2] : "";
    const ModeSummary& c = row.for_mode(RegressionMode::Classic);
    const ModeSummary& b = row.for_mode(RegressionMode::Block);
    out += fmt::format(
        "{:<6} {:<9} {:<7} {:>7.3f} {:>7.3f}  {:>15} {:>15}  {:>6.3f} {:>6.3f}  {:>6.3f} {:>6.3f}\n",
        slope, groups, overlap, c.mean_beta_hat, b.mean_beta_hat,
        fmt::format("[{:.3f},{:.3f}]", c.mean_ci_lower, c.mean_ci_upper),
        fmt::format("[{:.3f},{:.3f}]", b.mean_ci_lower, b.mean_ci_upper), c.coverage,
        b.coverage, c.power, b.power);
  }
  return out;
}

void write_plot_data(std::ostream& out, const GroupedDataset& ds,
                     const std::vector<PlotLine>& lines) {
  out << "# points\n";
  write_csv(out, ds);
  out << "# lines\nline,intercept,slope\n";
  for (const auto& l : lines) {
    out << fmt::format("{},{:.17g},{:.17g}\n", l.name, l.intercept, l.slope);
  }
}

}  // namespace bpbr::io
