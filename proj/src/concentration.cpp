#include "topoconc/concentration.hpp"

#include <algorithm>
#include <ostream>

#include "topoconc/error.hpp"
#include "topoconc/parallel.hpp"
#include "topoconc/util.hpp"

namespace topoconc {

const char* tc_norm_name(TcNorm norm) {
  switch (norm) {
    case TcNorm::Product: return "product";
    case TcNorm::Source: return "source";
    case TcNorm::Min: return "min";
  }
  return "?";
}

HopSets hop_sets(const Graph& g, const EdgeSplit& split, NodeId node, int K) {
  if (K < 1) {
    throw Error(ErrorKind::InvalidParameter, "hop count K must be >= 1");
  }
  const std::size_t n = g.node_count();
  if (node < 0 || static_cast<std::size_t>(node) >= n) {
    throw Error(ErrorKind::NotFound, "unknown node id");
  }
  HopSets out;
  out.owner = node;
  out.max_hop = K;
  out.sets.resize(K);

  std::vector<char> mark(n, 0);
  std::vector<NodeId> frontier{node};
  std::vector<NodeId> next;
  for (int k = 1; k <= K; ++k) {
    next.clear();
    for (NodeId u : frontier) {
      for (NodeId v : split.neighbors(SplitType::Train, u)) {
        if (!mark[v]) {
          mark[v] = 1;
          next.push_back(v);
        }
      }
    }
    std::sort(next.begin(), next.end());
    for (NodeId v : next) mark[v] = 0;
    auto& set = out.sets[k - 1];
    set.reserve(next.size());
    for (NodeId v : next) {
      if (v != node) set.push_back(v);
    }
    frontier = next;  // the owner stays in the frontier: walks may revisit it
  }
  return out;
}

namespace {

std::size_t sorted_intersection_size(std::span<const NodeId> a,
                                     std::span<const NodeId> b) {
  std::size_t count = 0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] < b[ib]) {
      ++ia;
    } else if (b[ib] < a[ia]) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

double norm_term(TcNorm norm, std::size_t a, std::size_t b) {
  switch (norm) {
    case TcNorm::Product:
      return static_cast<double>(a) * static_cast<double>(b);
    case TcNorm::Source:
      return static_cast<double>(a);
    case TcNorm::Min:
      return static_cast<double>(std::min(a, b));
  }
  return 0.0;
}

// I(S_i, S_j): discounted observed intersections over discounted possible
// intersections across all hop pairs. Zero-normalization pairs are skipped;
// if every pair is skipped the intersection counts as 0.
double tree_intersection(const HopSets& si, const HopSets& sj,
                         std::span<const double> beta_pow, TcNorm norm) {
  double num = 0.0;
  double den = 0.0;
  const int K = si.max_hop;
  for (int k1 = 1; k1 <= K; ++k1) {
    const auto hi = si.hop(k1);
    for (int k2 = 1; k2 <= K; ++k2) {
      const auto hj = sj.hop(k2);
      const double gval = norm_term(norm, hi.size(), hj.size());
      if (gval == 0.0) continue;
      const double w = beta_pow[k1 + k2 - 2];
      num += w * static_cast<double>(sorted_intersection_size(hi, hj));
      den += w * gval;
    }
  }
  return den > 0.0 ? num / den : 0.0;
}

std::vector<double> beta_powers(double beta, int K) {
  std::vector<double> pow(2 * K - 1, 1.0);
  for (std::size_t j = 1; j < pow.size(); ++j) pow[j] = pow[j - 1] * beta;
  return pow;
}

void validate_params(const TcParams& params) {
  if (params.hops < 1) {
    throw Error(ErrorKind::InvalidParameter, "hop count K must be >= 1");
  }
  if (!(params.beta > 0.0) || params.beta > 1.0) {
    throw Error(ErrorKind::InvalidParameter, "beta must lie in (0, 1]");
  }
}

TCResult tc_with_sets(const EdgeSplit& split,
                      const std::vector<HopSets>& all_sets, NodeId node,
                      SplitType type, const TcParams& params,
                      std::span<const double> beta_pow) {
  TCResult result;
  result.node = node;
  result.split_type = type;
  result.hops = params.hops;
  result.beta = params.beta;
  result.norm = params.norm;
  auto nbrs = split.neighbors(type, node);
  if (nbrs.empty()) return result;
  double acc = 0.0;
  for (NodeId j : nbrs) {
    acc += tree_intersection(all_sets[node], all_sets[j], beta_pow,
                             params.norm);
  }
  result.value = acc / static_cast<double>(nbrs.size());
  return result;
}

}  // namespace

TCResult tc(const Graph& g, const EdgeSplit& split, NodeId node,
            SplitType type, const TcParams& params) {
  validate_params(params);
  if (node < 0 || static_cast<std::size_t>(node) >= g.node_count()) {
    throw Error(ErrorKind::NotFound, "unknown node id");
  }
  const auto beta_pow = beta_powers(params.beta, params.hops);
  TCResult result;
  result.node = node;
  result.split_type = type;
  result.hops = params.hops;
  result.beta = params.beta;
  result.norm = params.norm;
  auto nbrs = split.neighbors(type, node);
  if (nbrs.empty()) return result;
  const HopSets si = hop_sets(g, split, node, params.hops);
  double acc = 0.0;
  for (NodeId j : nbrs) {
    const HopSets sj = hop_sets(g, split, j, params.hops);
    acc += tree_intersection(si, sj, beta_pow, params.norm);
  }
  result.value = acc / static_cast<double>(nbrs.size());
  return result;
}

std::vector<TCResult> tc_all(const Graph& g, const EdgeSplit& split,
                             SplitType type, const TcParams& params,
                             int workers) {
  validate_params(params);
  const std::size_t n = g.node_count();
  const auto beta_pow = beta_powers(params.beta, params.hops);

  std::vector<HopSets> all_sets(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      all_sets[i] =
          hop_sets(g, split, static_cast<NodeId>(i), params.hops);
    }
  });

  std::vector<TCResult> results(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      results[i] = tc_with_sets(split, all_sets, static_cast<NodeId>(i),
                                type, params, beta_pow);
    }
  });
  return results;
}

std::optional<double> weighted_tc(const Graph& g, const EdgeSplit& split,
                                  NodeId node,
                                  std::span<const double> scores) {
  if (node < 0 || static_cast<std::size_t>(node) >= g.node_count()) {
    throw Error(ErrorKind::NotFound, "unknown node id");
  }
  auto nbrs = split.neighbors(SplitType::Train, node);
  if (nbrs.empty()) return std::nullopt;
  if (scores.size() != nbrs.size()) {
    throw Error(ErrorKind::InvalidWeights,
                "score count does not match train neighbor count");
  }
  double sum = 0.0;
  for (double s : scores) {
    if (s < 0.0) {
      throw Error(ErrorKind::InvalidWeights, "scores must be nonnegative");
    }
    sum += s;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidWeights, "scores must sum to 1");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    auto their = split.neighbors(SplitType::Train, nbrs[k]);
    acc += scores[k] *
           static_cast<double>(sorted_intersection_size(nbrs, their));
  }
  return acc / static_cast<double>(nbrs.size());
}

double subgraph_density(const Graph& g, const EdgeSplit& split, NodeId node) {
  auto nbrs = split.neighbors(SplitType::Train, node);
  if (nbrs.empty()) return 0.0;
  const std::size_t n = g.node_count();
  std::vector<char> member(n, 0);
  member[node] = 1;
  for (NodeId v : nbrs) member[v] = 1;
  const std::size_t size = nbrs.size() + 1;
  std::size_t edges = 0;
  auto count_row = [&](NodeId u) {
    for (NodeId v : split.neighbors(SplitType::Train, u)) {
      if (v > u && member[v]) ++edges;
    }
  };
  count_row(node);
  for (NodeId v : nbrs) count_row(v);
  const double pairs = static_cast<double>(size) *
                       static_cast<double>(size - 1) / 2.0;
  return static_cast<double>(edges) / pairs;
}

void write_tc_csv(std::ostream& out, const Graph& g,
                  std::span<const TCResult> results) {
  out << "node_label,split_type,K,beta,norm,value\n";
  for (const TCResult& r : results) {
    out << g.label(r.node) << ',' << split_type_name(r.split_type) << ','
        << r.hops << ',' << format_double(r.beta) << ','
        << tc_norm_name(r.norm) << ',';
    if (r.value) {
      out << format_double(*r.value);
    } else {
      out << "NA";
    }
    out << '\n';
  }
}

}  // namespace topoconc
