#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace topoconc {

using NodeId = std::int32_t;

// Compressed sparse row matrix with double weights. Row count equals the
// node count; the column pattern of every matrix built over train edges is
// a subset of the train adjacency.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::int64_t> row_ptr;  // size rows + 1
  std::vector<NodeId> cols;
  std::vector<double> vals;

  std::span<const NodeId> row_cols(std::size_t i) const {
    return {cols.data() + row_ptr[i],
            static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
  }
  std::span<const double> row_vals(std::size_t i) const {
    return {vals.data() + row_ptr[i],
            static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
  }
  std::span<double> row_vals_mut(std::size_t i) {
    return {vals.data() + row_ptr[i],
            static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
  }
  std::int64_t nnz() const { return static_cast<std::int64_t>(cols.size()); }
};

}  // namespace topoconc
