#include "topoconc/atc.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "topoconc/error.hpp"
#include "topoconc/parallel.hpp"
#include "topoconc/rng.hpp"

namespace topoconc {

const char* similarity_name(Similarity phi) {
  return phi == Similarity::Cosine ? "cosine" : "dot";
}

EmbeddingMatrix init_embeddings(std::size_t n, std::size_t d,
                                std::uint64_t seed, VarianceMode variance) {
  if (n < 1 || d < 1) {
    throw Error(ErrorKind::InvalidParameter,
                "embedding matrix needs n >= 1 and d >= 1");
  }
  EmbeddingMatrix m;
  m.rows = n;
  m.dim = d;
  m.seed = seed;
  m.kind = EmbeddingKind::Raw;
  m.values.resize(n * d);
  const double scale =
      variance == VarianceMode::InverseDim ? 1.0 / std::sqrt(static_cast<double>(d))
                                           : 1.0;
  Rng rng(seed);
  for (double& v : m.values) v = scale * rng.next_gaussian();
  return m;
}

std::vector<double> discount_alpha(int K, double beta) {
  std::vector<double> alpha(K, 1.0);
  for (int k = 1; k < K; ++k) alpha[k] = alpha[k - 1] * beta;
  return alpha;
}

EmbeddingMatrix diffuse(const CsrMatrix& adj, const EmbeddingMatrix& R, int K,
                        std::span<const double> alpha, int workers) {
  if (K < 1) {
    throw Error(ErrorKind::InvalidParameter, "diffusion needs K >= 1");
  }
  if (alpha.size() != static_cast<std::size_t>(K)) {
    throw Error(ErrorKind::InvalidParameter,
                "alpha length must equal the hop count K");
  }
  if (adj.rows != R.rows) {
    throw Error(ErrorKind::InvalidParameter,
                "adjacency and embedding row counts differ");
  }
  const std::size_t n = R.rows;
  const std::size_t d = R.dim;

  EmbeddingMatrix out;
  out.rows = n;
  out.dim = d;
  out.seed = R.seed;
  out.kind = EmbeddingKind::Diffused;
  out.diffusion_hops = K;
  out.alpha.assign(alpha.begin(), alpha.end());
  out.values.assign(n * d, 0.0);

  std::vector<double> cur(R.values);
  std::vector<double> next(n * d);
  for (int k = 0; k < K; ++k) {
    parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double* dst = next.data() + i * d;
        std::memset(dst, 0, d * sizeof(double));
        auto cols = adj.row_cols(i);
        auto vals = adj.row_vals(i);
        for (std::size_t e = 0; e < cols.size(); ++e) {
          const double w = vals[e];
          const double* src = cur.data() + static_cast<std::size_t>(cols[e]) * d;
          for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
        }
        double* acc = out.values.data() + i * d;
        const double a = alpha[k];
        for (std::size_t c = 0; c < d; ++c) acc[c] += a * dst[c];
      }
    });
    cur.swap(next);
  }
  return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double similarity(std::span<const double> a, std::span<const double> b,
                  Similarity phi) {
  const double d = dot(a, b);
  if (phi == Similarity::Dot) return d;
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return d / (na * nb);
}

}  // namespace

std::optional<double> atc(const EmbeddingMatrix& diffused,
                          const EdgeSplit& split, NodeId node, SplitType type,
                          Similarity phi) {
  if (node < 0 || static_cast<std::size_t>(node) >= diffused.rows) {
    throw Error(ErrorKind::NotFound, "unknown node id");
  }
  auto nbrs = split.neighbors(type, node);
  if (nbrs.empty()) return std::nullopt;
  const auto own = diffused.row(node);
  double acc = 0.0;
  for (NodeId j : nbrs) acc += similarity(own, diffused.row(j), phi);
  return acc / static_cast<double>(nbrs.size());
}

std::vector<std::optional<double>> atc_all(const EmbeddingMatrix& diffused,
                                           const EdgeSplit& split,
                                           SplitType type, Similarity phi,
                                           int workers) {
  const std::size_t n = diffused.rows;
  std::vector<std::optional<double>> out(n);
  parallel_chunks(n, workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = atc(diffused, split, static_cast<NodeId>(i), type, phi);
    }
  });
  return out;
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

}  // namespace

void write_embeddings(std::ostream& out, const EmbeddingMatrix& m) {
  put_u64(out, m.rows);
  put_u64(out, m.dim);
  for (double v : m.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

EmbeddingMatrix read_embeddings(std::istream& in) {
  EmbeddingMatrix m;
  m.rows = get_u64(in);
  m.dim = get_u64(in);
  if (!in) throw Error(ErrorKind::Parse, "truncated embedding header");
  m.values.resize(m.rows * m.dim);
  for (double& v : m.values) v = std::bit_cast<double>(get_u64(in));
  if (!in) throw Error(ErrorKind::Parse, "truncated embedding payload");
  return m;
}

}  // namespace topoconc
