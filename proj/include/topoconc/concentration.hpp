#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "topoconc/split.hpp"

namespace topoconc {

// Hop sets H^1..H^K around one node over train edges. H^k holds every node
// other than the owner reachable by at least one walk of length k; the walk
// may pass through the owner, only the recorded set excludes it. Sets are
// sorted dense ids.
struct HopSets {
  NodeId owner = 0;
  int max_hop = 0;
  std::vector<std::vector<NodeId>> sets;  // sets[k-1] = H^k

  std::span<const NodeId> hop(int k) const { return sets[k - 1]; }
};

HopSets hop_sets(const Graph& g, const EdgeSplit& split, NodeId node, int K);

enum class TcNorm { Product, Source, Min };

const char* tc_norm_name(TcNorm norm);

struct TcParams {
  int hops = 2;          // K
  double beta = 0.5;     // per-hop discount, in (0, 1]
  TcNorm norm = TcNorm::Product;
};

struct TCResult {
  NodeId node = 0;
  SplitType split_type = SplitType::Train;
  int hops = 0;
  double beta = 0.0;
  TcNorm norm = TcNorm::Product;
  std::optional<double> value;  // empty when the node has no type-t neighbors
};

// Topological Concentration of one node: the average computation-tree
// intersection against its type-t neighbors. Hop pairs where the
// normalization term is zero contribute to neither sum; a neighbor whose
// every pair vanishes contributes an intersection of 0.
TCResult tc(const Graph& g, const EdgeSplit& split, NodeId node,
            SplitType type, const TcParams& params);

// One TCResult per node, identical to per-node tc calls; fan-out parallel.
std::vector<TCResult> tc_all(const Graph& g, const EdgeSplit& split,
                             SplitType type, const TcParams& params,
                             int workers = 1);

// Score-weighted 1-hop TC with source normalization: sum over train
// neighbors of score * |H_i^1 n H_j^1| / |H_i^1|. Scores follow the sorted
// train-neighbor order and must be nonnegative and sum to 1.
std::optional<double> weighted_tc(const Graph& g, const EdgeSplit& split,
                                  NodeId node,
                                  std::span<const double> scores);

// Density of the closed 1-hop train neighborhood; 0 for train-isolated
// nodes. Equals the local clustering coefficient of the closed subgraph.
double subgraph_density(const Graph& g, const EdgeSplit& split, NodeId node);

// CSV rows `node_label,split_type,K,beta,norm,value`, NA when undefined.
void write_tc_csv(std::ostream& out, const Graph& g,
                  std::span<const TCResult> results);

}  // namespace topoconc
