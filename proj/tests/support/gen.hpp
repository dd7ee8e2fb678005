#pragma once

// Deterministic graph generators for tests. Everything routes through
// make_graph so edges are canonicalized exactly like the production loader.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topoconc/graph.hpp"
#include "topoconc/rng.hpp"
#include "topoconc/split.hpp"

namespace testgen {

using topoconc::Edge;
using topoconc::Graph;
using topoconc::NodeId;

inline Graph make_graph(std::size_t n,
                        std::vector<std::pair<int, int>> edges,
                        std::vector<std::int64_t> timestamps = {}) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto canon = [&](std::size_t idx) {
    auto [a, b] = edges[idx];
    return Edge{static_cast<NodeId>(std::min(a, b)),
                static_cast<NodeId>(std::max(a, b))};
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canon(a) < canon(b);
  });
  std::vector<Edge> sorted;
  std::vector<std::int64_t> ts;
  for (std::size_t idx : order) {
    Edge e = canon(idx);
    if (!sorted.empty() && sorted.back() == e) continue;
    sorted.push_back(e);
    if (!timestamps.empty()) ts.push_back(timestamps[idx]);
  }
  return Graph(std::move(labels), std::move(sorted), std::move(ts));
}

inline topoconc::EdgeSplit full_train_split(const Graph& g) {
  return topoconc::split_edges(g, {1.0, 0.0, 0.0},
                               topoconc::SplitStrategy::Random, 0);
}

inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  topoconc::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }
  }
  return make_graph(n, std::move(edges));
}

// Planted-partition graph; per-block within probabilities, one across
// probability.
inline Graph sbm(const std::vector<std::size_t>& block_sizes,
                 const std::vector<double>& p_within, double p_across,
                 std::uint64_t seed) {
  std::vector<std::size_t> block_of;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    for (std::size_t i = 0; i < block_sizes[b]; ++i) block_of.push_back(b);
  }
  const std::size_t n = block_of.size();
  topoconc::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = block_of[u] == block_of[v] ? p_within[block_of[u]]
                                                  : p_across;
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }
  }
  return make_graph(n, std::move(edges));
}

// Exactly m distinct edges over n nodes, uniform without replacement.
inline Graph uniform_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
  topoconc::Rng rng(seed);
  std::set<std::pair<int, int>> chosen;
  while (chosen.size() < m) {
    int u = static_cast<int>(rng.next_below(n));
    int v = static_cast<int>(rng.next_below(n));
    if (u == v) continue;
    chosen.emplace(std::min(u, v), std::max(u, v));
  }
  return make_graph(n, {chosen.begin(), chosen.end()});
}

// Timestamped growth process: nodes arrive over time and recent nodes stay
// the most active, so late (test-window) neighbors carry thin train-era
// context. Produces the topological-distribution-shift mechanism under a
// temporal split.
inline Graph growth_graph(std::size_t steps, std::uint64_t seed) {
  topoconc::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::int64_t> stamps;
  std::set<std::pair<int, int>> seen;
  int next_node = 5;
  // seed clique on the first five nodes
  std::int64_t t = 0;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) {
      edges.emplace_back(u, v);
      stamps.push_back(t++);
      seen.emplace(u, v);
    }
  }
  for (std::size_t s = 0; s < steps; ++s) {
    if (rng.next_double() < 0.35) {
      // a new node joins and links to one existing node
      const int u = next_node++;
      const int v = static_cast<int>(rng.next_below(u));
      edges.emplace_back(u, v);
      stamps.push_back(t++);
      seen.emplace(std::min(u, v), std::max(u, v));
    } else {
      // a recent node links to a uniform existing node
      const int pool = std::max(2, next_node / 5);
      int u = next_node - 1 - static_cast<int>(rng.next_below(pool));
      int v = static_cast<int>(rng.next_below(next_node));
      if (u == v) continue;
      auto key = std::minmax(u, v);
      if (!seen.emplace(key.first, key.second).second) continue;
      edges.emplace_back(u, v);
      stamps.push_back(t++);
    }
  }
  return make_graph(static_cast<std::size_t>(next_node), std::move(edges),
                    std::move(stamps));
}

}  // namespace testgen
