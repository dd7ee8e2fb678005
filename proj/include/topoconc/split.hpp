#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "topoconc/graph.hpp"

namespace topoconc {

enum class SplitType { Train = 0, Val = 1, Test = 2 };

inline const char* split_type_name(SplitType t) {
  switch (t) {
    case SplitType::Train: return "Tr";
    case SplitType::Val: return "Val";
    case SplitType::Test: return "Te";
  }
  return "?";
}

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;
};

enum class SplitStrategy { Random, Temporal };

// Disjoint partition of the graph's edges plus per-node neighbor lists for
// each split type. Immutable after construction.
class EdgeSplit {
 public:
  EdgeSplit(const Graph& g, std::vector<SplitType> assignment);

  std::span<const Edge> edges(SplitType t) const { return edges_[idx(t)]; }
  std::span<const NodeId> neighbors(SplitType t, NodeId i) const {
    const auto& part = adj_[idx(t)];
    return {part.neighbors.data() + part.offsets[i],
            static_cast<std::size_t>(part.offsets[i + 1] - part.offsets[i])};
  }
  std::size_t degree(SplitType t, NodeId i) const {
    return neighbors(t, i).size();
  }
  // Aligned with Graph::edges().
  std::span<const SplitType> assignment() const { return assignment_; }
  std::size_t node_count() const { return node_count_; }

 private:
  static std::size_t idx(SplitType t) { return static_cast<std::size_t>(t); }
  struct Adjacency {
    std::vector<std::int64_t> offsets;
    std::vector<NodeId> neighbors;
  };
  std::size_t node_count_;
  std::vector<SplitType> assignment_;
  std::array<std::vector<Edge>, 3> edges_;
  std::array<Adjacency, 3> adj_;
};

// Random: seeded uniform permutation of the canonical edge list, then
// contiguous slicing. Temporal: edges sorted ascending by timestamp,
// earliest fraction to train, latest to test. Val/test counts are
// floor(m * ratio); the remainder goes to train.
EdgeSplit split_edges(const Graph& g, SplitRatios ratios,
                      SplitStrategy strategy, std::uint64_t seed = 0);

}  // namespace topoconc
