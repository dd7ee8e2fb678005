#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "topoconc/normalize.hpp"
#include "topoconc/split.hpp"

namespace topoconc {

enum class VarianceMode {
  InverseDim,  // per-coordinate variance 1/d: rows have unit expected norm
  Unit         // standard normal entries: self dot products center on d
};

enum class EmbeddingKind { Raw, Diffused };

struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;  // row-major
  std::uint64_t seed = 0;
  EmbeddingKind kind = EmbeddingKind::Raw;
  int diffusion_hops = 0;           // set on diffused matrices
  std::vector<double> alpha;        // per-hop weights used by diffuse

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }
  std::span<double> row_mut(std::size_t i) {
    return {values.data() + i * dim, dim};
  }
};

// Gaussian random projection matrix; deterministic for a fixed seed.
EmbeddingMatrix init_embeddings(std::size_t n, std::size_t d,
                                std::uint64_t seed,
                                VarianceMode variance = VarianceMode::InverseDim);

// N = sum_k alpha_k * A^k * R by K successive sparse products; A^k is never
// materialized. Rows isolated in train diffuse to zero vectors.
EmbeddingMatrix diffuse(const CsrMatrix& adj, const EmbeddingMatrix& R, int K,
                        std::span<const double> alpha, int workers = 1);

inline EmbeddingMatrix diffuse(const NormalizedAdjacency& adj,
                               const EmbeddingMatrix& R, int K,
                               std::span<const double> alpha,
                               int workers = 1) {
  return diffuse(adj.matrix, R, K, alpha, workers);
}

// Default per-hop weights alpha_k = beta^(k-1).
std::vector<double> discount_alpha(int K, double beta);

enum class Similarity { Cosine, Dot };

const char* similarity_name(Similarity phi);

// Mean similarity between a node's diffused vector and those of its type-t
// neighbors. Cosine against a zero vector is 0.
std::optional<double> atc(const EmbeddingMatrix& diffused,
                          const EdgeSplit& split, NodeId node, SplitType type,
                          Similarity phi = Similarity::Cosine);

std::vector<std::optional<double>> atc_all(const EmbeddingMatrix& diffused,
                                           const EdgeSplit& split,
                                           SplitType type,
                                           Similarity phi = Similarity::Cosine,
                                           int workers = 1);

// Little-endian binary: n and d as u64, then row-major 64-bit floats.
void write_embeddings(std::ostream& out, const EmbeddingMatrix& m);
EmbeddingMatrix read_embeddings(std::istream& in);

}  // namespace topoconc
