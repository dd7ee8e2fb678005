#include "topoconc/reweight.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "topoconc/error.hpp"
#include "topoconc/parallel.hpp"
#include "topoconc/util.hpp"

namespace topoconc {

PairScorer dot_product_scorer() {
  return [](NodeId, NodeId, std::span<const double> ni,
            std::span<const double> hj) {
    double s = 0.0;
    for (std::size_t c = 0; c < ni.size(); ++c) s += ni[c] * hj[c];
    return s;
  };
}

PairScorer common_neighbor_scorer(const EdgeSplit& split) {
  return [&split](NodeId i, NodeId j, std::span<const double>,
                  std::span<const double>) {
    auto a = split.neighbors(SplitType::Train, i);
    auto b = split.neighbors(SplitType::Train, j);
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
    return static_cast<double>(count);
  };
}

EmbeddingMatrix neighborhood_embeddings(const CsrMatrix& adj,
                                        const EmbeddingMatrix& H) {
  if (adj.rows != H.rows) {
    throw Error(ErrorKind::InvalidParameter,
                "adjacency and embedding row counts differ");
  }
  EmbeddingMatrix out;
  out.rows = H.rows;
  out.dim = H.dim;
  out.seed = H.seed;
  out.kind = EmbeddingKind::Diffused;
  out.values.assign(H.rows * H.dim, 0.0);
  const std::size_t d = H.dim;
  for (std::size_t i = 0; i < adj.rows; ++i) {
    auto cols = adj.row_cols(i);
    auto vals = adj.row_vals(i);
    double* dst = out.values.data() + i * d;
    for (std::size_t e = 0; e < cols.size(); ++e) {
      const double w = vals[e];
      const double* src = H.values.data() + static_cast<std::size_t>(cols[e]) * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
    }
  }
  return out;
}

std::optional<std::vector<double>> score_softmax(
    NodeId node, std::span<const double> neighborhood_row,
    const EmbeddingMatrix& H, const PairScorer& predictor,
    SoftmaxDomain domain, const EdgeSplit& split) {
  std::vector<NodeId> candidates;
  if (domain == SoftmaxDomain::Neighbors) {
    auto nbrs = split.neighbors(SplitType::Train, node);
    if (nbrs.empty()) return std::nullopt;
    candidates.assign(nbrs.begin(), nbrs.end());
  } else {
    candidates.resize(H.rows);
    for (std::size_t j = 0; j < H.rows; ++j) {
      candidates[j] = static_cast<NodeId>(j);
    }
  }
  std::vector<double> logits(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    logits[k] = predictor(node, candidates[k], neighborhood_row,
                          H.row(candidates[k]));
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - peak);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

void reweight_step(ReweightState& state, std::span<const double> edge_scores,
                   double gamma) {
  if (gamma < 0.0) {
    throw Error(ErrorKind::InvalidParameter, "gamma must be nonnegative");
  }
  if (edge_scores.size() != state.adj.vals.size()) {
    throw Error(ErrorKind::InvalidScores,
                "edge scores must align with the train sparsity pattern");
  }
  for (std::size_t e = 0; e < edge_scores.size(); ++e) {
    if (edge_scores[e] < 0.0) {
      throw Error(ErrorKind::InvalidScores, "edge scores must be nonnegative");
    }
    state.adj.vals[e] += gamma * edge_scores[e];
  }
  ++state.tau;
}

namespace {

// Per-node mean of weight * |H_i^1 n H_j^1| / |H_i^1| with the current row
// normalized to a distribution; common-neighbor counts are fixed by the
// train topology, so they are precomputed per CSR slot.
double mean_weighted_tc(const CsrMatrix& adj,
                        const std::vector<double>& edge_common) {
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < adj.rows; ++i) {
    auto vals = adj.row_vals(i);
    if (vals.empty()) continue;
    double row_sum = 0.0;
    for (double w : vals) row_sum += w;
    if (row_sum <= 0.0) continue;
    double acc = 0.0;
    const double* common = edge_common.data() + adj.row_ptr[i];
    for (std::size_t e = 0; e < vals.size(); ++e) {
      acc += (vals[e] / row_sum) * common[e];
    }
    total += acc / static_cast<double>(vals.size());
    ++counted;
  }
  return counted > 0 ? total / static_cast<double>(counted) : 0.0;
}

std::vector<double> per_edge_common_neighbors(const CsrMatrix& adj,
                                              const EdgeSplit& split) {
  std::vector<double> common(adj.cols.size(), 0.0);
  auto scorer = common_neighbor_scorer(split);
  for (std::size_t i = 0; i < adj.rows; ++i) {
    auto cols = adj.row_cols(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      common[adj.row_ptr[i] + static_cast<std::int64_t>(e)] =
          scorer(static_cast<NodeId>(i), cols[e], {}, {});
    }
  }
  return common;
}

void renormalize_rows(CsrMatrix& adj) {
  for (std::size_t i = 0; i < adj.rows; ++i) {
    auto vals = adj.row_vals_mut(i);
    double row_sum = 0.0;
    for (double w : vals) row_sum += w;
    if (row_sum <= 0.0) continue;
    for (double& w : vals) w /= row_sum;
  }
}

}  // namespace

ReweightOutcome run_reweighting(const Graph& g, const EdgeSplit& split,
                                const PairScorer& predictor,
                                const ReweightConfig& config) {
  if (config.update_interval < 1) {
    throw Error(ErrorKind::InvalidParameter, "update interval must be >= 1");
  }
  if (config.warmup < 0) {
    throw Error(ErrorKind::InvalidParameter, "warmup must be >= 0");
  }
  if (config.gamma < 0.0) {
    throw Error(ErrorKind::InvalidParameter, "gamma must be nonnegative");
  }
  const SoftmaxDomain domain = config.domain.value_or(
      g.node_count() > 10000 ? SoftmaxDomain::Neighbors : SoftmaxDomain::Full);

  const NormalizedAdjacency base = normalize(g, split, NormMode::Row);
  ReweightOutcome out;
  out.state.adj = base.matrix;
  out.state.gamma = config.gamma;

  const EmbeddingMatrix R =
      init_embeddings(g.node_count(), config.dim, config.seed);
  const auto alpha = discount_alpha(config.diffusion_hops, config.beta);
  const auto edge_common = per_edge_common_neighbors(out.state.adj, split);

  double current = mean_weighted_tc(out.state.adj, edge_common);
  out.trace.emplace_back(0, current);
  out.state.history.push_back(current);

  std::vector<double> edge_scores(out.state.adj.vals.size(), 0.0);
  for (int tau = 1; tau <= config.iterations; ++tau) {
    if (tau % config.update_interval != 0 || tau <= config.warmup) {
      ++out.state.tau;
      continue;
    }
    // Embeddings always track the current adjacency; they are only needed on
    // update iterations because nothing else reads them.
    const EmbeddingMatrix H =
        diffuse(out.state.adj, R, config.diffusion_hops, alpha,
                config.workers);
    const EmbeddingMatrix N = neighborhood_embeddings(base.matrix, H);

    std::fill(edge_scores.begin(), edge_scores.end(), 0.0);
    const std::size_t n = g.node_count();
    parallel_chunks(n, config.workers, [&](std::size_t begin,
                                           std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const NodeId node = static_cast<NodeId>(i);
        auto cols = out.state.adj.row_cols(i);
        if (cols.empty()) continue;
        auto scores =
            score_softmax(node, N.row(i), H, predictor, domain, split);
        if (!scores) continue;
        double* row = edge_scores.data() + out.state.adj.row_ptr[i];
        if (domain == SoftmaxDomain::Neighbors) {
          // Neighbor scores share the sorted CSR column order.
          for (std::size_t e = 0; e < cols.size(); ++e) row[e] = (*scores)[e];
        } else {
          for (std::size_t e = 0; e < cols.size(); ++e) {
            row[e] = (*scores)[static_cast<std::size_t>(cols[e])];
          }
        }
      }
    });
    reweight_step(out.state, edge_scores, config.gamma);
    if (config.renormalize) renormalize_rows(out.state.adj);
    ++out.updates_applied;
    current = mean_weighted_tc(out.state.adj, edge_common);
    out.trace.emplace_back(out.state.tau, current);
    out.state.history.push_back(current);
  }
  return out;
}

void write_adjacency_csv(std::ostream& out, const Graph& g,
                         const CsrMatrix& adj) {
  out << "src,dst,weight\n";
  for (std::size_t i = 0; i < adj.rows; ++i) {
    auto cols = adj.row_cols(i);
    auto vals = adj.row_vals(i);
    for (std::size_t e = 0; e < cols.size(); ++e) {
      out << g.label(static_cast<NodeId>(i)) << ',' << g.label(cols[e]) << ','
          << format_double(vals[e]) << '\n';
    }
  }
}

void write_trace_csv(std::ostream& out,
                     std::span<const std::pair<int, double>> trace) {
  out << "tau,mean_weighted_tc\n";
  for (const auto& [tau, value] : trace) {
    out << tau << ',' << format_double(value) << '\n';
  }
}

}  // namespace topoconc
