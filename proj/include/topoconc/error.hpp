#pragma once

#include <stdexcept>
#include <string>

namespace topoconc {

enum class ErrorKind {
  Config,            // malformed run-config file or flag value
  Parse,             // malformed edge-list record
  EmptyGraph,        // no edges in input
  InvalidParameter,  // out-of-range argument (K, ratios, dims, ...)
  InvalidRatio,      // negative or non-normalizable split ratios
  MissingTimestamp,  // temporal split without per-edge timestamps
  InvalidWeights,    // neighbor score vector violates its contract
  InvalidScores,     // edge score vector off the train sparsity pattern
  NotFound,          // unknown node id or label
  UndefinedStatistic,// statistic has no value (zero variance, empty data)
  MissingInput,      // input path does not exist
  Schema             // report/table column mismatch
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::EmptyGraph: return "empty-graph";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidRatio: return "invalid-ratio";
    case ErrorKind::MissingTimestamp: return "missing-timestamp";
    case ErrorKind::InvalidWeights: return "invalid-weights";
    case ErrorKind::InvalidScores: return "invalid-scores";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::UndefinedStatistic: return "undefined-statistic";
    case ErrorKind::MissingInput: return "missing-input";
    case ErrorKind::Schema: return "schema";
  }
  return "unknown";
}

}  // namespace topoconc
