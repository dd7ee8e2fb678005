#pragma once

// Independent reference implementations kept deliberately naive: explicit
// sets, dense matrices, and direct formula evaluation. They never call the
// code paths they check.

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "topoconc/concentration.hpp"
#include "topoconc/graph.hpp"
#include "topoconc/split.hpp"

namespace oracle {

using topoconc::EdgeSplit;
using topoconc::Graph;
using topoconc::NodeId;
using topoconc::SplitType;
using topoconc::TcNorm;

// reach[k-1][u] = endpoints of length-k walks from u over train edges,
// built by explicit boolean matrix powering; owner retained here and
// stripped at use.
inline std::vector<std::vector<std::set<int>>> walk_reach(
    const Graph& g, const EdgeSplit& split, int K) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (NodeId v : split.neighbors(SplitType::Train, static_cast<NodeId>(u))) {
      adj[u][v] = 1;
    }
  }
  std::vector<std::vector<std::set<int>>> reach(K);
  std::vector<std::vector<char>> cur = adj;
  for (int k = 1; k <= K; ++k) {
    reach[k - 1].resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (cur[u][v]) reach[k - 1][u].insert(static_cast<int>(v));
      }
    }
    if (k == K) break;
    std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t w = 0; w < n; ++w) {
        if (!cur[u][w]) continue;
        for (std::size_t v = 0; v < n; ++v) {
          if (adj[w][v]) next[u][v] = 1;
        }
      }
    }
    cur = std::move(next);
  }
  return reach;
}

inline std::set<int> hop_set_of(
    const std::vector<std::vector<std::set<int>>>& reach, int node, int k) {
  std::set<int> h = reach[k - 1][node];
  h.erase(node);
  return h;
}

inline double norm_term(TcNorm norm, std::size_t a, std::size_t b) {
  switch (norm) {
    case TcNorm::Product: return double(a) * double(b);
    case TcNorm::Source: return double(a);
    case TcNorm::Min: return double(std::min(a, b));
  }
  return 0.0;
}

inline std::size_t set_intersection_size(const std::set<int>& a,
                                         const std::set<int>& b) {
  std::size_t c = 0;
  for (int x : a) c += b.count(x);
  return c;
}

// Direct evaluation of the concentration definition from explicit sets.
// Returns NaN when the node has no type-t neighbors.
inline double tc_oracle(const Graph& g, const EdgeSplit& split, int node,
                        SplitType type, int K, double beta, TcNorm norm) {
  auto reach = walk_reach(g, split, K);
  auto nbrs = split.neighbors(type, static_cast<NodeId>(node));
  if (nbrs.empty()) return std::nan("");
  std::vector<std::set<int>> hi(K), hj(K);
  for (int k = 1; k <= K; ++k) hi[k - 1] = hop_set_of(reach, node, k);
  double total = 0.0;
  for (NodeId j : nbrs) {
    for (int k = 1; k <= K; ++k) hj[k - 1] = hop_set_of(reach, j, k);
    double num = 0.0, den = 0.0;
    for (int k1 = 1; k1 <= K; ++k1) {
      for (int k2 = 1; k2 <= K; ++k2) {
        const double gval =
            norm_term(norm, hi[k1 - 1].size(), hj[k2 - 1].size());
        if (gval == 0.0) continue;
        const double w = std::pow(beta, k1 + k2 - 2);
        num += w * double(set_intersection_size(hi[k1 - 1], hj[k2 - 1]));
        den += w * gval;
      }
    }
    total += den > 0.0 ? num / den : 0.0;
  }
  return total / double(nbrs.size());
}

// Dense reference for the power-iteration diffusion: materializes A^k.
inline std::vector<double> dense_diffuse(const std::vector<double>& adj,
                                         std::size_t n,
                                         const std::vector<double>& R,
                                         std::size_t d, int K,
                                         const std::vector<double>& alpha) {
  auto matmul = [n](const std::vector<double>& a,
                    const std::vector<double>& b) {
    std::vector<double> c(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double aik = a[i * n + k];
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
      }
    }
    return c;
  };
  std::vector<double> out(n * d, 0.0);
  std::vector<double> power = adj;
  for (int k = 0; k < K; ++k) {
    if (k > 0) power = matmul(power, adj);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += power[i * n + j] * R[j * d + c];
        }
        out[i * d + c] += alpha[k] * acc;
      }
    }
  }
  return out;
}

}  // namespace oracle
