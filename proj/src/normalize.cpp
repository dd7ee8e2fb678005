#include "topoconc/normalize.hpp"

#include <cmath>

namespace topoconc {

CsrMatrix train_pattern(const Graph& g, const EdgeSplit& split) {
  const std::size_t n = g.node_count();
  CsrMatrix m;
  m.rows = n;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    m.row_ptr[i + 1] =
        m.row_ptr[i] +
        static_cast<std::int64_t>(
            split.degree(SplitType::Train, static_cast<NodeId>(i)));
  }
  m.cols.reserve(m.row_ptr[n]);
  for (std::size_t i = 0; i < n; ++i) {
    auto nbrs = split.neighbors(SplitType::Train, static_cast<NodeId>(i));
    m.cols.insert(m.cols.end(), nbrs.begin(), nbrs.end());
  }
  m.vals.assign(m.cols.size(), 1.0);
  return m;
}

NormalizedAdjacency normalize(const Graph& g, const EdgeSplit& split,
                              NormMode mode) {
  NormalizedAdjacency out;
  out.mode = mode;
  out.matrix = train_pattern(g, split);
  CsrMatrix& m = out.matrix;
  for (std::size_t i = 0; i < m.rows; ++i) {
    auto cols = m.row_cols(i);
    auto vals = m.row_vals_mut(i);
    const double di = static_cast<double>(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (mode == NormMode::Row) {
        vals[k] = 1.0 / di;
      } else {
        const double dj = static_cast<double>(
            split.degree(SplitType::Train, cols[k]));
        vals[k] = 1.0 / std::sqrt(di * dj);
      }
    }
  }
  return out;
}

}  // namespace topoconc
