#include "topoconc/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topoconc/error.hpp"
#include "topoconc/rng.hpp"

namespace topoconc {

EdgeSplit::EdgeSplit(const Graph& g, std::vector<SplitType> assignment)
    : node_count_(g.node_count()), assignment_(std::move(assignment)) {
  auto all = g.edges();
  for (std::size_t e = 0; e < all.size(); ++e) {
    edges_[idx(assignment_[e])].push_back(all[e]);
  }
  const std::size_t n = node_count_;
  for (std::size_t t = 0; t < 3; ++t) {
    auto& part = adj_[t];
    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges_[t]) {
      ++deg[e.u];
      ++deg[e.v];
    }
    part.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      part.offsets[i + 1] = part.offsets[i] + deg[i];
    }
    part.neighbors.resize(part.offsets[n]);
    std::vector<std::int64_t> cursor(part.offsets.begin(),
                                     part.offsets.end() - 1);
    for (const Edge& e : edges_[t]) {
      part.neighbors[cursor[e.u]++] = e.v;
      part.neighbors[cursor[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(part.neighbors.begin() + part.offsets[i],
                part.neighbors.begin() + part.offsets[i + 1]);
    }
  }
}

EdgeSplit split_edges(const Graph& g, SplitRatios ratios,
                      SplitStrategy strategy, std::uint64_t seed) {
  if (ratios.train < 0 || ratios.val < 0 || ratios.test < 0) {
    throw Error(ErrorKind::InvalidRatio, "split ratios must be nonnegative");
  }
  double total = ratios.train + ratios.val + ratios.test;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidRatio, "split ratios must sum to 1");
  }
  const std::size_t m = g.edge_count();
  const auto n_val = static_cast<std::size_t>(
      std::floor(static_cast<double>(m) * ratios.val));
  const auto n_test = static_cast<std::size_t>(
      std::floor(static_cast<double>(m) * ratios.test));
  const std::size_t n_train = m - n_val - n_test;

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  if (strategy == SplitStrategy::Random) {
    Rng rng(seed);
    shuffle(order, rng);
  } else {
    if (!g.has_timestamps()) {
      throw Error(ErrorKind::MissingTimestamp,
                  "temporal split requires a timestamp on every edge");
    }
    auto stamps = g.timestamps();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return stamps[a] < stamps[b];
                     });
  }

  std::vector<SplitType> assignment(m, SplitType::Train);
  for (std::size_t pos = 0; pos < m; ++pos) {
    SplitType t = SplitType::Train;
    if (pos >= n_train + n_val) {
      t = SplitType::Test;
    } else if (pos >= n_train) {
      t = SplitType::Val;
    }
    assignment[order[pos]] = t;
  }
  return EdgeSplit(g, std::move(assignment));
}

}  // namespace topoconc
