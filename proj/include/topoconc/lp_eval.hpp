#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "topoconc/atc.hpp"
#include "topoconc/split.hpp"

namespace topoconc {

// Candidate list for one node, best score first. Excludes the node itself
// always and its train neighbors when requested; ties break by ascending id.
struct Ranking {
  NodeId owner = 0;
  std::vector<NodeId> candidates;
  std::vector<NodeId> excluded;  // sorted
};

Ranking rank_candidates(std::span<const double> scores, NodeId owner,
                        bool exclude_train, const EdgeSplit& split);

struct MetricValues {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double ndcg = 0.0;
  double mrr = 0.0;
  double hits = 0.0;
};

// Node-centric metrics at cutoff K. NDCG divides by the full top-K ideal
// mass sum_{k=1..K} 1/log2(k+1); MRR is 1/rank of the first hit inside the
// top K, 0 when none lands there. truth must be sorted and nonempty.
MetricValues node_metrics(const Ranking& ranking,
                          std::span<const NodeId> truth, int K);

// Fraction of positives strictly above the K-th largest negative score.
// Ties with the threshold do not count.
double link_hits_at_k(std::span<const double> pos_scores,
                      std::span<const double> neg_scores, int K);

// Parameters of the untrained-predictor analysis: ranking K candidates out
// of N when truth_size of them are relevant.
struct BiasOracle {
  std::int64_t universe = 0;    // N
  int cutoff = 0;               // K
  std::int64_t truth_size = 0;  // |E^hat|
};

struct ExpectedMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double ndcg = 0.0;
  double intersection = 0.0;  // E|candidates n truth|
};

// Closed-form expectations under the hypergeometric intersection law.
ExpectedMetrics expected_metrics_untrained(const BiasOracle& oracle);

struct SimulatedMetrics {
  MetricValues mean;
  MetricValues stderr_of_mean;
  std::vector<std::int64_t> intersection_histogram;  // index = |n truth|
  std::int64_t trials = 0;
};

// Monte-Carlo runs of the untrained ranking process: each trial draws K
// ordered candidates uniformly without replacement and scores them with the
// exact node metrics. Deterministic for fixed (seed, trials, workers).
SimulatedMetrics simulate_untrained(const BiasOracle& oracle,
                                    std::int64_t trials, std::uint64_t seed,
                                    int workers = 1);

// Training-free scorer over diffused embeddings: score(i, j) = N_i . N_j.
class DiffusionPredictor {
 public:
  explicit DiffusionPredictor(const EmbeddingMatrix& diffused)
      : emb_(&diffused) {}

  double score(NodeId i, NodeId j) const;
  // Fills one length-n row of scores against every node (self included).
  void score_row(NodeId i, std::span<double> out) const;
  std::size_t node_count() const { return emb_->rows; }
  const EmbeddingMatrix& embeddings() const { return *emb_; }

 private:
  const EmbeddingMatrix* emb_;
};

struct MetricReportRow {
  NodeId node = 0;
  int cutoff = 0;
  MetricValues values;
};

// CSV `node_label,K,recall,precision,f1,ndcg,mrr,hits`.
void write_metric_csv(std::ostream& out, const Graph& g,
                      std::span<const MetricReportRow> rows);

}  // namespace topoconc
