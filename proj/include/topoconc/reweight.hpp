#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "topoconc/atc.hpp"
#include "topoconc/normalize.hpp"

namespace topoconc {

// Pair-scoring hook: logit for aggregating node j into node i's row, given
// i's aggregated neighborhood embedding and j's raw embedding. The default
// predictor is their dot product; callers may ignore the embeddings and
// score from topology instead.
using PairScorer = std::function<double(
    NodeId i, NodeId j, std::span<const double> neighborhood_i,
    std::span<const double> embedding_j)>;

PairScorer dot_product_scorer();

// Scorer by train common-neighbor count; satisfies the monotonicity
// premise of the weighted-TC dominance bound.
PairScorer common_neighbor_scorer(const EdgeSplit& split);

enum class SoftmaxDomain { Full, Neighbors };

// Message-passing adjacency under additive reweighting. The nonzero pattern
// never grows beyond the train adjacency and all weights stay nonnegative.
struct ReweightState {
  CsrMatrix adj;
  int tau = 0;
  double gamma = 0.0;
  std::vector<double> history;  // mean weighted TC, one entry per update
};

// One sparse-dense product: row-averaged (or reweighted) neighbor
// embeddings. Zero rows stay zero vectors.
EmbeddingMatrix neighborhood_embeddings(const CsrMatrix& adj,
                                        const EmbeddingMatrix& H);

// Softmax-normalized link scores for one node. Full domain normalizes over
// every node; neighbors domain over the train neighbors only, where the
// result sums to 1. Returns nullopt for a train-isolated node in neighbors
// domain. Output order follows the candidate order of the domain.
std::optional<std::vector<double>> score_softmax(
    NodeId node, std::span<const double> neighborhood_row,
    const EmbeddingMatrix& H, const PairScorer& predictor,
    SoftmaxDomain domain, const EdgeSplit& split);

// Adds gamma * S on train-edge positions; edge_scores aligns with the CSR
// slots of state.adj and zeros elsewhere are implied.
void reweight_step(ReweightState& state, std::span<const double> edge_scores,
                   double gamma);

struct ReweightConfig {
  int iterations = 10;       // T
  int update_interval = 1;   // Delta
  int warmup = 0;            // T^warm
  double gamma = 0.1;
  std::size_t dim = 64;
  int diffusion_hops = 2;
  double beta = 0.5;         // discount feeding the diffusion alphas
  std::uint64_t seed = 0;
  // Full keeps the paper-faithful O(n) denominator; Neighbors restricts it
  // to the train neighborhood. Unset picks Full for n <= 10000.
  std::optional<SoftmaxDomain> domain;
  bool renormalize = false;  // row-renormalize after each update
  int workers = 1;
};

struct ReweightOutcome {
  ReweightState state;
  // (tau, mean weighted TC) trace; entry 0 records the starting adjacency.
  std::vector<std::pair<int, double>> trace;
  int updates_applied = 0;
};

// The reweighting schedule: every update_interval iterations past warmup,
// diffuse embeddings on the current adjacency, softmax-score train edges,
// and add gamma * S. Weight updates never touch model parameters; the
// predictor is training-free or caller-supplied.
ReweightOutcome run_reweighting(const Graph& g, const EdgeSplit& split,
                                const PairScorer& predictor,
                                const ReweightConfig& config);

// CSV `src,dst,weight` over the directed nonzeros.
void write_adjacency_csv(std::ostream& out, const Graph& g,
                         const CsrMatrix& adj);
// CSV `tau,mean_weighted_tc`.
void write_trace_csv(std::ostream& out,
                     std::span<const std::pair<int, double>> trace);

}  // namespace topoconc
