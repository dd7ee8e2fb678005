#include "topoconc/lp_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "topoconc/error.hpp"
#include "topoconc/parallel.hpp"
#include "topoconc/rng.hpp"
#include "topoconc/util.hpp"

namespace topoconc {

Ranking rank_candidates(std::span<const double> scores, NodeId owner,
                        bool exclude_train, const EdgeSplit& split) {
  const std::size_t n = split.node_count();
  if (scores.size() != n) {
    throw Error(ErrorKind::InvalidParameter,
                "score row length must equal the node count");
  }
  Ranking r;
  r.owner = owner;
  r.excluded.push_back(owner);
  if (exclude_train) {
    auto nbrs = split.neighbors(SplitType::Train, owner);
    r.excluded.insert(r.excluded.end(), nbrs.begin(), nbrs.end());
  }
  std::sort(r.excluded.begin(), r.excluded.end());
  r.excluded.erase(std::unique(r.excluded.begin(), r.excluded.end()),
                   r.excluded.end());

  r.candidates.reserve(n - r.excluded.size());
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId id = static_cast<NodeId>(i);
    if (!std::binary_search(r.excluded.begin(), r.excluded.end(), id)) {
      r.candidates.push_back(id);
    }
  }
  std::sort(r.candidates.begin(), r.candidates.end(),
            [&](NodeId a, NodeId b) {
              if (scores[a] != scores[b]) return scores[a] > scores[b];
              return a < b;
            });
  return r;
}

namespace {

// Ideal top-K discounted mass, sum_{k=1..K} 1/log2(k+1).
double ndcg_denominator(int K) {
  double s = 0.0;
  for (int k = 1; k <= K; ++k) s += 1.0 / std::log2(static_cast<double>(k + 1));
  return s;
}

}  // namespace

MetricValues node_metrics(const Ranking& ranking,
                          std::span<const NodeId> truth, int K) {
  if (K < 1) {
    throw Error(ErrorKind::InvalidParameter, "cutoff K must be >= 1");
  }
  if (truth.empty()) {
    throw Error(ErrorKind::InvalidParameter,
                "ground-truth set must be nonempty");
  }
  const std::size_t top =
      std::min<std::size_t>(ranking.candidates.size(), static_cast<std::size_t>(K));
  std::size_t hits = 0;
  double dcg = 0.0;
  int first_hit_rank = 0;
  for (std::size_t k = 0; k < top; ++k) {
    const NodeId v = ranking.candidates[k];
    if (std::binary_search(truth.begin(), truth.end(), v)) {
      ++hits;
      dcg += 1.0 / std::log2(static_cast<double>(k + 2));
      if (first_hit_rank == 0) first_hit_rank = static_cast<int>(k + 1);
    }
  }
  MetricValues out;
  const double inter = static_cast<double>(hits);
  out.recall = inter / static_cast<double>(truth.size());
  out.precision = inter / static_cast<double>(K);
  out.f1 = 2.0 * inter /
           (static_cast<double>(K) + static_cast<double>(truth.size()));
  out.ndcg = dcg / ndcg_denominator(K);
  out.mrr = first_hit_rank > 0 ? 1.0 / static_cast<double>(first_hit_rank) : 0.0;
  out.hits = hits > 0 ? 1.0 : 0.0;
  return out;
}

double link_hits_at_k(std::span<const double> pos_scores,
                      std::span<const double> neg_scores, int K) {
  if (pos_scores.empty() || neg_scores.empty()) {
    throw Error(ErrorKind::InvalidParameter,
                "positive and negative score lists must be nonempty");
  }
  if (K < 1 || static_cast<std::size_t>(K) > neg_scores.size()) {
    throw Error(ErrorKind::InvalidParameter,
                "K must lie in [1, |negatives|]");
  }
  std::vector<double> negs(neg_scores.begin(), neg_scores.end());
  std::nth_element(negs.begin(), negs.begin() + (K - 1), negs.end(),
                   std::greater<double>());
  const double threshold = negs[K - 1];
  std::size_t above = 0;
  for (double p : pos_scores) {
    if (p > threshold) ++above;
  }
  return static_cast<double>(above) / static_cast<double>(pos_scores.size());
}

namespace {

void validate_oracle(const BiasOracle& o) {
  if (o.universe < 1 || o.cutoff < 1 ||
      static_cast<std::int64_t>(o.cutoff) > o.universe ||
      o.truth_size < 0 || o.truth_size > o.universe) {
    throw Error(ErrorKind::InvalidParameter,
                "bias oracle requires 1 <= K <= N and 0 <= truth <= N");
  }
}

}  // namespace

ExpectedMetrics expected_metrics_untrained(const BiasOracle& oracle) {
  validate_oracle(oracle);
  const double N = static_cast<double>(oracle.universe);
  const double K = static_cast<double>(oracle.cutoff);
  const double E = static_cast<double>(oracle.truth_size);
  ExpectedMetrics out;
  out.recall = K / N;
  out.precision = E / N;
  out.ndcg = E / N;
  out.f1 = (2.0 * K / N) * (E / (K + E));
  out.intersection = K * E / N;
  return out;
}

namespace {

struct Accumulator {
  double sum[6] = {0, 0, 0, 0, 0, 0};
  double sum_sq[6] = {0, 0, 0, 0, 0, 0};
  std::vector<std::int64_t> histogram;

  void add(const MetricValues& v, std::size_t inter) {
    const double vals[6] = {v.recall, v.precision, v.f1,
                            v.ndcg,   v.mrr,       v.hits};
    for (int i = 0; i < 6; ++i) {
      sum[i] += vals[i];
      sum_sq[i] += vals[i] * vals[i];
    }
    ++histogram[inter];
  }
};

// One trial: a partial Fisher-Yates draw of K ordered candidates from
// 0..N-1, truth fixed to ids below truth_size (uniform placement is
// equivalent under the exchangeable draw). The array need not be reset
// between trials; the partial shuffle draws a uniform ordered K-subset
// from any permutation of 0..N-1.
void run_trials(const BiasOracle& o, std::int64_t trials, std::uint64_t seed,
                Accumulator& acc, std::vector<std::int64_t>& perm) {
  Rng rng(seed);
  const auto N = static_cast<std::uint64_t>(o.universe);
  const int K = o.cutoff;
  const std::int64_t E = o.truth_size;
  const double denom = ndcg_denominator(K);

  for (std::int64_t t = 0; t < trials; ++t) {
    for (int k = 0; k < K; ++k) {
      const std::uint64_t j =
          static_cast<std::uint64_t>(k) + rng.next_below(N - static_cast<std::uint64_t>(k));
      std::swap(perm[k], perm[j]);
    }
    std::size_t hits = 0;
    double dcg = 0.0;
    int first_hit = 0;
    for (int k = 0; k < K; ++k) {
      if (perm[k] < E) {
        ++hits;
        dcg += 1.0 / std::log2(static_cast<double>(k + 2));
        if (first_hit == 0) first_hit = k + 1;
      }
    }
    MetricValues v;
    const double inter = static_cast<double>(hits);
    v.recall = E > 0 ? inter / static_cast<double>(E) : 0.0;
    v.precision = inter / static_cast<double>(K);
    v.f1 = E > 0 ? 2.0 * inter / static_cast<double>(K + E) : 0.0;
    v.ndcg = dcg / denom;
    v.mrr = first_hit > 0 ? 1.0 / static_cast<double>(first_hit) : 0.0;
    v.hits = hits > 0 ? 1.0 : 0.0;
    acc.add(v, hits);
  }
}

}  // namespace

SimulatedMetrics simulate_untrained(const BiasOracle& oracle,
                                    std::int64_t trials, std::uint64_t seed,
                                    int workers) {
  validate_oracle(oracle);
  if (trials < 1) {
    throw Error(ErrorKind::InvalidParameter, "trials must be >= 1");
  }
  workers = resolve_workers(workers);
  const std::int64_t chunks = std::min<std::int64_t>(workers, trials);
  std::vector<Accumulator> accs(chunks);
  for (auto& a : accs) {
    a.histogram.assign(static_cast<std::size_t>(oracle.cutoff) + 1, 0);
  }

  const std::int64_t base = trials / chunks;
  const std::int64_t extra = trials % chunks;
  parallel_chunks(static_cast<std::size_t>(chunks), static_cast<int>(chunks),
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t c = begin; c < end; ++c) {
                      const std::int64_t quota =
                          base + (static_cast<std::int64_t>(c) < extra ? 1 : 0);
                      std::vector<std::int64_t> perm(oracle.universe);
                      std::iota(perm.begin(), perm.end(), 0);
                      run_trials(oracle, quota, mix_seed(seed, c), accs[c],
                                 perm);
                    }
                  });

  SimulatedMetrics out;
  out.trials = trials;
  out.intersection_histogram.assign(
      static_cast<std::size_t>(oracle.cutoff) + 1, 0);
  double sum[6] = {0, 0, 0, 0, 0, 0};
  double sum_sq[6] = {0, 0, 0, 0, 0, 0};
  for (const auto& a : accs) {
    for (int i = 0; i < 6; ++i) {
      sum[i] += a.sum[i];
      sum_sq[i] += a.sum_sq[i];
    }
    for (std::size_t i = 0; i < out.intersection_histogram.size(); ++i) {
      out.intersection_histogram[i] += a.histogram[i];
    }
  }
  const double n = static_cast<double>(trials);
  double* means[6] = {&out.mean.recall, &out.mean.precision, &out.mean.f1,
                      &out.mean.ndcg,   &out.mean.mrr,       &out.mean.hits};
  double* errs[6] = {&out.stderr_of_mean.recall, &out.stderr_of_mean.precision,
                     &out.stderr_of_mean.f1,     &out.stderr_of_mean.ndcg,
                     &out.stderr_of_mean.mrr,    &out.stderr_of_mean.hits};
  for (int i = 0; i < 6; ++i) {
    const double mean = sum[i] / n;
    *means[i] = mean;
    const double var = n > 1 ? std::max(0.0, (sum_sq[i] - n * mean * mean) / (n - 1)) : 0.0;
    *errs[i] = std::sqrt(var / n);
  }
  return out;
}

double DiffusionPredictor::score(NodeId i, NodeId j) const {
  const auto a = emb_->row(i);
  const auto b = emb_->row(j);
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

void DiffusionPredictor::score_row(NodeId i, std::span<double> out) const {
  for (std::size_t j = 0; j < emb_->rows; ++j) {
    out[j] = score(i, static_cast<NodeId>(j));
  }
}

void write_metric_csv(std::ostream& out, const Graph& g,
                      std::span<const MetricReportRow> rows) {
  out << "node_label,K,recall,precision,f1,ndcg,mrr,hits\n";
  for (const auto& r : rows) {
    out << g.label(r.node) << ',' << r.cutoff << ','
        << format_double(r.values.recall) << ','
        << format_double(r.values.precision) << ','
        << format_double(r.values.f1) << ',' << format_double(r.values.ndcg)
        << ',' << format_double(r.values.mrr) << ','
        << format_double(r.values.hits) << '\n';
  }
}

}  // namespace topoconc
