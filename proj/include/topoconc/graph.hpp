#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "topoconc/sparse.hpp"

namespace topoconc {

struct Edge {
  NodeId u = 0;  // canonical: u < v
  NodeId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LoadStats {
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
  std::size_t lines_read = 0;
};

// Immutable undirected graph: symmetric sorted adjacency in compressed row
// form, dense ids assigned in first-seen order, original labels retained.
class Graph {
 public:
  Graph(std::vector<std::string> labels, std::vector<Edge> edges,
        std::vector<std::int64_t> timestamps);

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i],
            static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::size_t degree(NodeId i) const {
    return static_cast<std::size_t>(offsets_[i + 1] - offsets_[i]);
  }

  // Canonical edge list, sorted by (u, v) with u < v.
  std::span<const Edge> edges() const { return edges_; }
  bool has_timestamps() const { return !timestamps_.empty(); }
  // Aligned with edges(); empty when the input carried no timestamps.
  std::span<const std::int64_t> timestamps() const { return timestamps_; }

  const std::string& label(NodeId i) const { return labels_[i]; }
  std::span<const std::string> labels() const { return labels_; }
  std::optional<NodeId> id_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_index_;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> timestamps_;
  std::vector<std::int64_t> offsets_;
  std::vector<NodeId> adjacency_;
};

// Parses `src dst [timestamp]` records separated by whitespace or commas.
// Lines starting with '#' and blank lines are skipped. Duplicate edges are
// collapsed and self-loops dropped; both are counted in stats.
Graph load_edge_list(std::istream& in, LoadStats* stats = nullptr);

// Sorted dense-id pairs, one per line, LF endings; timestamps appended when
// the graph has them.
void write_canonical_edge_list(std::ostream& out, const Graph& g);

// Two-column CSV `label,id`.
void write_label_map(std::ostream& out, const Graph& g);

}  // namespace topoconc
