#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace topoconc {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Aligned per-node columns keyed by name. Missing entries are NaN and drop
// out of statistics pairwise.
class NodeTable {
 public:
  explicit NodeTable(std::vector<std::string> row_labels)
      : row_labels_(std::move(row_labels)) {}

  std::size_t row_count() const { return row_labels_.size(); }
  std::span<const std::string> row_labels() const { return row_labels_; }

  void add_column(const std::string& name, std::vector<double> values);
  bool has_column(const std::string& name) const;
  std::span<const double> column(const std::string& name) const;  // Schema error if absent
  std::span<const std::string> column_names() const { return names_; }

  // CSV with a leading node_label column.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

// Pearson r over pairwise-complete entries. Undefined-statistic error with
// fewer than two complete pairs or zero variance on either side.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
  std::string metric;
  std::string against;
  std::vector<int> cutoffs;
  std::vector<double> per_cutoff_r;
  double absolute_avg = 0.0;  // mean of |r|
  double basic_avg = 0.0;     // mean of r
};

// Correlates `<metric>@K` columns against a topology column across the
// given cutoffs.
CorrelationReport correlation_report(const NodeTable& table,
                                     const std::string& metric,
                                     std::span<const int> cutoffs,
                                     const std::string& against);

struct BinReport {
  std::vector<double> edges;   // size bins + 1
  std::vector<double> mean;    // NaN for empty bins
  std::vector<std::size_t> count;
};

// Left-closed right-open bins over `by`, last bin right-closed; per-bin
// mean of `value`. Rows missing either column are skipped.
BinReport bin_report(const NodeTable& table, const std::string& by,
                     std::span<const double> bin_edges,
                     const std::string& value);

struct TdsReport {
  std::vector<double> shift;           // aligned with table rows, NaN excluded
  std::size_t included = 0;
  std::size_t excluded = 0;
  double mean = 0.0;
  double median = 0.0;
  std::vector<double> deciles;         // q10..q90
  std::optional<double> gap_correlation;
};

// Topological distribution shift: per-node val-TC minus test-TC, summary
// statistics, and optionally the Pearson r against a performance-gap
// column.
TdsReport tds_report(const NodeTable& table,
                     const std::string& val_column = "tc_val",
                     const std::string& test_column = "tc_te",
                     const std::optional<std::string>& gap_column = std::nullopt);

}  // namespace topoconc
