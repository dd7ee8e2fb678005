#include "topoconc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>

#include "topoconc/error.hpp"

namespace topoconc {

Graph::Graph(std::vector<std::string> labels, std::vector<Edge> edges,
             std::vector<std::int64_t> timestamps)
    : labels_(std::move(labels)),
      edges_(std::move(edges)),
      timestamps_(std::move(timestamps)) {
  const std::size_t n = labels_.size();
  label_index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    label_index_.emplace(labels_[i], static_cast<NodeId>(i));
  }

  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::int64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[cursor[e.u]++] = e.v;
    adjacency_[cursor[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i],
              adjacency_.begin() + offsets_[i + 1]);
  }
}

std::optional<NodeId> Graph::id_of(const std::string& label) const {
  auto it = label_index_.find(label);
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [](char c) {
    return c == ' ' || c == '\t' || c == ',' || c == '\r';
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_sep(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

}  // namespace

Graph load_edge_list(std::istream& in, LoadStats* stats) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> index;
  // Keyed on the canonical (min, max) pair; value is the slot in `raw`.
  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<Edge> raw;
  std::vector<std::int64_t> stamps;
  LoadStats local;
  std::size_t timestamped = 0;

  auto intern = [&](std::string_view token) -> NodeId {
    auto it = index.find(std::string(token));
    if (it != index.end()) return it->second;
    NodeId id = static_cast<NodeId>(labels.size());
    labels.emplace_back(token);
    index.emplace(labels.back(), id);
    return id;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0].front() == '#') continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw Error(ErrorKind::Parse,
                  "line " + std::to_string(line_no) + ": expected 2 or 3 "
                  "tokens, got " + std::to_string(tokens.size()));
    }
    ++local.lines_read;
    NodeId a = intern(tokens[0]);
    NodeId b = intern(tokens[1]);
    std::int64_t ts = 0;
    bool has_ts = tokens.size() == 3;
    if (has_ts) {
      const char* first = tokens[2].data();
      const char* last = first + tokens[2].size();
      auto [ptr, ec] = std::from_chars(first, last, ts);
      if (ec != std::errc() || ptr != last) {
        throw Error(ErrorKind::Parse,
                    "line " + std::to_string(line_no) +
                        ": timestamp is not an integer");
      }
    }
    if (a == b) {
      ++local.self_loops;
      continue;
    }
    Edge e{std::min(a, b), std::max(a, b)};
    std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) |
                        static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.v));
    auto [it, inserted] = seen.emplace(key, raw.size());
    if (!inserted) {
      ++local.duplicate_edges;
      continue;
    }
    raw.push_back(e);
    stamps.push_back(ts);
    if (has_ts) ++timestamped;
  }

  if (local.lines_read == 0) {
    throw Error(ErrorKind::EmptyGraph, "input contains no edge records");
  }

  // Timestamps are kept only when every surviving edge carries one.
  if (timestamped != raw.size()) stamps.clear();

  // Canonical order: sort edges by (u, v), timestamps move with them.
  std::vector<std::size_t> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw[a] < raw[b];
  });
  std::vector<Edge> edges;
  edges.reserve(raw.size());
  std::vector<std::int64_t> ts_sorted;
  ts_sorted.reserve(stamps.size());
  for (std::size_t idx : order) {
    edges.push_back(raw[idx]);
    if (!stamps.empty()) ts_sorted.push_back(stamps[idx]);
  }

  if (stats) *stats = local;
  return Graph(std::move(labels), std::move(edges), std::move(ts_sorted));
}

void write_canonical_edge_list(std::ostream& out, const Graph& g) {
  auto edges = g.edges();
  auto stamps = g.timestamps();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << edges[i].u << ' ' << edges[i].v;
    if (!stamps.empty()) out << ' ' << stamps[i];
    out << '\n';
  }
}

void write_label_map(std::ostream& out, const Graph& g) {
  out << "label,id\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out << g.label(static_cast<NodeId>(i)) << ',' << i << '\n';
  }
}

}  // namespace topoconc
