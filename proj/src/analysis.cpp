#include "topoconc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "topoconc/error.hpp"
#include "topoconc/util.hpp"

namespace topoconc {

void NodeTable::add_column(const std::string& name,
                           std::vector<double> values) {
  if (values.size() != row_labels_.size()) {
    throw Error(ErrorKind::Schema,
                "column '" + name + "' length does not match row count");
  }
  if (has_column(name)) {
    throw Error(ErrorKind::Schema, "duplicate column '" + name + "'");
  }
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

bool NodeTable::has_column(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> NodeTable::column(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error(ErrorKind::Schema, "missing column '" + name + "'");
  }
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

void NodeTable::write_csv(std::ostream& out) const {
  out << "node_label";
  for (const auto& name : names_) out << ',' << name;
  out << '\n';
  for (std::size_t r = 0; r < row_labels_.size(); ++r) {
    out << row_labels_[r];
    for (const auto& col : columns_) out << ',' << format_double(col[r]);
    out << '\n';
  }
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::InvalidParameter, "pearson inputs differ in length");
  }
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    sx += x[i];
    sy += y[i];
    ++n;
  }
  if (n < 2) {
    throw Error(ErrorKind::UndefinedStatistic,
                "pearson needs at least two complete pairs");
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) continue;
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    cov += dx * dy;
    vx += dx * dx;
    vy += dy * dy;
  }
  if (vx == 0.0 || vy == 0.0) {
    throw Error(ErrorKind::UndefinedStatistic,
                "pearson undefined under zero variance");
  }
  return cov / std::sqrt(vx * vy);
}

CorrelationReport correlation_report(const NodeTable& table,
                                     const std::string& metric,
                                     std::span<const int> cutoffs,
                                     const std::string& against) {
  CorrelationReport report;
  report.metric = metric;
  report.against = against;
  const auto topo = table.column(against);
  double abs_sum = 0.0;
  double sum = 0.0;
  for (int k : cutoffs) {
    const std::string col = metric + "@" + std::to_string(k);
    const double r = pearson(table.column(col), topo);
    report.cutoffs.push_back(k);
    report.per_cutoff_r.push_back(r);
    abs_sum += std::abs(r);
    sum += r;
  }
  const double count = static_cast<double>(cutoffs.size());
  report.absolute_avg = abs_sum / count;
  report.basic_avg = sum / count;
  return report;
}

BinReport bin_report(const NodeTable& table, const std::string& by,
                     std::span<const double> bin_edges,
                     const std::string& value) {
  if (bin_edges.size() < 2) {
    throw Error(ErrorKind::InvalidParameter, "need at least two bin edges");
  }
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) {
      throw Error(ErrorKind::InvalidParameter,
                  "bin edges must be strictly increasing");
    }
  }
  const auto keys = table.column(by);
  const auto vals = table.column(value);
  const std::size_t bins = bin_edges.size() - 1;
  BinReport report;
  report.edges.assign(bin_edges.begin(), bin_edges.end());
  report.count.assign(bins, 0);
  std::vector<double> sums(bins, 0.0);
  for (std::size_t r = 0; r < keys.size(); ++r) {
    if (std::isnan(keys[r]) || std::isnan(vals[r])) continue;
    const double k = keys[r];
    if (k < bin_edges.front() || k > bin_edges.back()) continue;
    std::size_t b =
        static_cast<std::size_t>(std::upper_bound(bin_edges.begin(),
                                                  bin_edges.end(), k) -
                                 bin_edges.begin());
    // upper_bound gives the first edge above k; the last bin is closed.
    b = b == 0 ? 0 : b - 1;
    if (b >= bins) b = bins - 1;
    sums[b] += vals[r];
    ++report.count[b];
  }
  report.mean.assign(bins, kMissing);
  for (std::size_t b = 0; b < bins; ++b) {
    if (report.count[b] > 0) {
      report.mean[b] = sums[b] / static_cast<double>(report.count[b]);
    }
  }
  return report;
}

namespace {

double quantile_sorted(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

TdsReport tds_report(const NodeTable& table, const std::string& val_column,
                     const std::string& test_column,
                     const std::optional<std::string>& gap_column) {
  const auto val = table.column(val_column);
  const auto te = table.column(test_column);
  TdsReport report;
  report.shift.assign(val.size(), kMissing);
  std::vector<double> present;
  for (std::size_t r = 0; r < val.size(); ++r) {
    if (std::isnan(val[r]) || std::isnan(te[r])) {
      ++report.excluded;
      continue;
    }
    report.shift[r] = val[r] - te[r];
    present.push_back(report.shift[r]);
  }
  report.included = present.size();
  if (present.empty()) {
    throw Error(ErrorKind::UndefinedStatistic,
                "no node carries both validation and test concentration");
  }
  double sum = 0.0;
  for (double s : present) sum += s;
  report.mean = sum / static_cast<double>(present.size());
  std::sort(present.begin(), present.end());
  report.median = quantile_sorted(present, 0.5);
  for (int dec = 1; dec <= 9; ++dec) {
    report.deciles.push_back(
        quantile_sorted(present, static_cast<double>(dec) / 10.0));
  }
  if (gap_column) {
    report.gap_correlation = pearson(report.shift, table.column(*gap_column));
  }
  return report;
}

}  // namespace topoconc
