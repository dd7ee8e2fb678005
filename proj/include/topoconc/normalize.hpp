#pragma once

#include "topoconc/sparse.hpp"
#include "topoconc/split.hpp"

namespace topoconc {

enum class NormMode { Row, Symmetric };

// Normalized train adjacency. Row mode: each nonzero row sums to 1.
// Symmetric mode: weight(u, v) = 1 / sqrt(d_u * d_v) with train degrees.
// Nodes isolated in train keep an all-zero row.
struct NormalizedAdjacency {
  NormMode mode = NormMode::Row;
  CsrMatrix matrix;
};

NormalizedAdjacency normalize(const Graph& g, const EdgeSplit& split,
                              NormMode mode);

// The train adjacency pattern with unit weights; shared starting point for
// normalization and reweighting.
CsrMatrix train_pattern(const Graph& g, const EdgeSplit& split);

}  // namespace topoconc
