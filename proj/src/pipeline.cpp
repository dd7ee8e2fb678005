#include "topoconc/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "topoconc/analysis.hpp"
#include "topoconc/error.hpp"
#include "topoconc/lp_eval.hpp"
#include "topoconc/parallel.hpp"
#include "topoconc/rng.hpp"
#include "topoconc/util.hpp"

namespace topoconc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(ErrorKind::Config, "key '" + key + "': expected integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Config, "key '" + key + "': expected number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::Config, "key '" + key + "': expected true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("input", input);
  e.emplace_back("output", output);
  e.emplace_back("workers", std::to_string(workers));
  e.emplace_back("split.train", format_exact(ratios.train));
  e.emplace_back("split.val", format_exact(ratios.val));
  e.emplace_back("split.test", format_exact(ratios.test));
  e.emplace_back("split.strategy",
                 strategy == SplitStrategy::Random ? "random" : "temporal");
  e.emplace_back("split.seed", std::to_string(split_seed));
  e.emplace_back("tc.k", std::to_string(tc.hops));
  e.emplace_back("tc.beta", format_exact(tc.beta));
  e.emplace_back("tc.norm", tc_norm_name(tc.norm));
  e.emplace_back("atc.dim", std::to_string(atc_dim));
  e.emplace_back("atc.k", std::to_string(atc_hops));
  e.emplace_back("atc.phi", similarity_name(atc_phi));
  e.emplace_back("atc.seed", std::to_string(atc_seed));
  e.emplace_back("atc.variance",
                 atc_variance == VarianceMode::InverseDim ? "inv_dim" : "unit");
  {
    std::vector<std::string> parts;
    for (double a : atc_alpha) parts.push_back(format_exact(a));
    e.emplace_back("atc.alpha", join_list(parts));
  }
  {
    std::vector<std::string> parts;
    for (int k : eval_cutoffs) parts.push_back(std::to_string(k));
    e.emplace_back("eval.ks", join_list(parts));
  }
  e.emplace_back("eval.exclude_train", eval_exclude_train ? "true" : "false");
  e.emplace_back("eval.negatives", std::to_string(eval_negatives));
  e.emplace_back("eval.seed", std::to_string(eval_seed));
  e.emplace_back("reweight.iterations", std::to_string(reweight.iterations));
  e.emplace_back("reweight.interval", std::to_string(reweight.update_interval));
  e.emplace_back("reweight.warmup", std::to_string(reweight.warmup));
  e.emplace_back("reweight.gamma", format_exact(reweight.gamma));
  e.emplace_back("reweight.dim", std::to_string(reweight.dim));
  e.emplace_back("reweight.k", std::to_string(reweight.diffusion_hops));
  e.emplace_back("reweight.beta", format_exact(reweight.beta));
  e.emplace_back("reweight.seed", std::to_string(reweight.seed));
  e.emplace_back("reweight.domain", reweight_domain);
  e.emplace_back("reweight.renormalize",
                 reweight.renormalize ? "true" : "false");
  e.emplace_back("bias.n", std::to_string(bias_universe));
  e.emplace_back("bias.k", std::to_string(bias_cutoff));
  e.emplace_back("bias.e", std::to_string(bias_truth));
  e.emplace_back("bias.trials", std::to_string(bias_trials));
  e.emplace_back("bias.seed", std::to_string(bias_seed));
  e.emplace_back("correlate.against", correlate_against);
  std::sort(e.begin(), e.end());
  return e;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") {
    input = value;
  } else if (key == "output") {
    output = value;
  } else if (key == "workers") {
    workers = parse_integer<int>(key, value);
  } else if (key == "split.train") {
    ratios.train = parse_real(key, value);
  } else if (key == "split.val") {
    ratios.val = parse_real(key, value);
  } else if (key == "split.test") {
    ratios.test = parse_real(key, value);
  } else if (key == "split.strategy") {
    if (value == "random") {
      strategy = SplitStrategy::Random;
    } else if (value == "temporal") {
      strategy = SplitStrategy::Temporal;
    } else {
      throw Error(ErrorKind::Config, "split.strategy must be random or temporal");
    }
  } else if (key == "split.seed") {
    split_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "tc.k") {
    tc.hops = parse_integer<int>(key, value);
  } else if (key == "tc.beta") {
    tc.beta = parse_real(key, value);
  } else if (key == "tc.norm") {
    if (value == "product") {
      tc.norm = TcNorm::Product;
    } else if (value == "source") {
      tc.norm = TcNorm::Source;
    } else if (value == "min") {
      tc.norm = TcNorm::Min;
    } else {
      throw Error(ErrorKind::Config, "tc.norm must be product, source, or min");
    }
  } else if (key == "atc.dim") {
    atc_dim = parse_integer<std::size_t>(key, value);
  } else if (key == "atc.k") {
    atc_hops = parse_integer<int>(key, value);
  } else if (key == "atc.phi") {
    if (value == "cosine") {
      atc_phi = Similarity::Cosine;
    } else if (value == "dot") {
      atc_phi = Similarity::Dot;
    } else {
      throw Error(ErrorKind::Config, "atc.phi must be cosine or dot");
    }
  } else if (key == "atc.seed") {
    atc_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "atc.variance") {
    if (value == "inv_dim") {
      atc_variance = VarianceMode::InverseDim;
    } else if (value == "unit") {
      atc_variance = VarianceMode::Unit;
    } else {
      throw Error(ErrorKind::Config, "atc.variance must be inv_dim or unit");
    }
  } else if (key == "atc.alpha") {
    atc_alpha.clear();
    for (const auto& item : split_list(value)) {
      atc_alpha.push_back(parse_real(key, item));
    }
  } else if (key == "eval.ks") {
    eval_cutoffs.clear();
    for (const auto& item : split_list(value)) {
      eval_cutoffs.push_back(parse_integer<int>(key, item));
    }
    if (eval_cutoffs.empty()) {
      throw Error(ErrorKind::Config, "eval.ks must name at least one cutoff");
    }
  } else if (key == "eval.exclude_train") {
    eval_exclude_train = parse_bool(key, value);
  } else if (key == "eval.negatives") {
    eval_negatives = parse_integer<std::size_t>(key, value);
  } else if (key == "eval.seed") {
    eval_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "reweight.iterations") {
    reweight.iterations = parse_integer<int>(key, value);
  } else if (key == "reweight.interval") {
    reweight.update_interval = parse_integer<int>(key, value);
  } else if (key == "reweight.warmup") {
    reweight.warmup = parse_integer<int>(key, value);
  } else if (key == "reweight.gamma") {
    reweight.gamma = parse_real(key, value);
  } else if (key == "reweight.dim") {
    reweight.dim = parse_integer<std::size_t>(key, value);
  } else if (key == "reweight.k") {
    reweight.diffusion_hops = parse_integer<int>(key, value);
  } else if (key == "reweight.beta") {
    reweight.beta = parse_real(key, value);
  } else if (key == "reweight.seed") {
    reweight.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "reweight.domain") {
    if (value != "auto" && value != "full" && value != "neighbors") {
      throw Error(ErrorKind::Config,
                  "reweight.domain must be auto, full, or neighbors");
    }
    reweight_domain = value;
  } else if (key == "reweight.renormalize") {
    reweight.renormalize = parse_bool(key, value);
  } else if (key == "bias.n") {
    bias_universe = parse_integer<std::int64_t>(key, value);
  } else if (key == "bias.k") {
    bias_cutoff = parse_integer<int>(key, value);
  } else if (key == "bias.e") {
    bias_truth = parse_integer<std::int64_t>(key, value);
  } else if (key == "bias.trials") {
    bias_trials = parse_integer<std::int64_t>(key, value);
  } else if (key == "bias.seed") {
    bias_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "correlate.against") {
    correlate_against = value;
  } else {
    throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  }
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::MissingInput, "cannot open config file " + path);
  }
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed;
    for (char c : line) {
      if (c != '\r') trimmed += c;
    }
    auto first = trimmed.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (trimmed[first] == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config,
                  "config line " + std::to_string(line_no) + ": missing '='");
    }
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      if (b == std::string::npos) return std::string();
      return s.substr(b, e - b + 1);
    };
    cfg.set(strip(trimmed.substr(0, eq)), strip(trimmed.substr(eq + 1)));
  }
  return cfg;
}

std::string RunConfig::resolved_output() const {
  if (!output.empty()) return output;
  if (const char* root = std::getenv("TOPOCONC_OUTPUT_ROOT")) {
    if (*root) return root;
  }
  return ".";
}

int RunConfig::resolved_worker_count() const {
  return resolve_workers(workers);
}

void write_config(std::ostream& out, const RunConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    out << key << " = " << value << '\n';
  }
}

namespace {

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::MissingInput,
                "cannot write output file " + path.string());
  }
  return out;
}

Graph load_graph_file(const std::string& path, LoadStats* stats) {
  if (path.empty()) {
    throw Error(ErrorKind::MissingInput, "no input edge list given");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::MissingInput, "cannot open input " + path);
  }
  return load_edge_list(in, stats);
}

std::vector<double> alpha_for(const RunConfig& cfg) {
  if (!cfg.atc_alpha.empty()) {
    if (cfg.atc_alpha.size() != static_cast<std::size_t>(cfg.atc_hops)) {
      throw Error(ErrorKind::Config, "atc.alpha length must equal atc.k");
    }
    return cfg.atc_alpha;
  }
  return discount_alpha(cfg.atc_hops, cfg.tc.beta);
}

struct LoadedRun {
  Graph graph;
  EdgeSplit split;
  LoadStats stats;
};

LoadedRun load_run(const RunConfig& cfg) {
  LoadStats stats;
  Graph g = load_graph_file(cfg.input, &stats);
  EdgeSplit split = split_edges(g, cfg.ratios, cfg.strategy, cfg.split_seed);
  return LoadedRun{std::move(g), std::move(split), stats};
}

EmbeddingMatrix diffused_for(const RunConfig& cfg, const Graph& g,
                             const EdgeSplit& split) {
  const auto norm = normalize(g, split, NormMode::Row);
  const auto raw =
      init_embeddings(g.node_count(), cfg.atc_dim, cfg.atc_seed, cfg.atc_variance);
  return diffuse(norm, raw, cfg.atc_hops, alpha_for(cfg),
                 cfg.resolved_worker_count());
}

void do_split(const LoadedRun& run, const fs::path& dir) {
  static const std::pair<SplitType, const char*> kParts[] = {
      {SplitType::Train, "train_edges.txt"},
      {SplitType::Val, "val_edges.txt"},
      {SplitType::Test, "test_edges.txt"},
  };
  for (const auto& [type, filename] : kParts) {
    auto out = open_output(dir / filename);
    for (const Edge& e : run.split.edges(type)) {
      out << e.u << ' ' << e.v << '\n';
    }
  }
  {
    auto out = open_output(dir / "label_map.csv");
    write_label_map(out, run.graph);
  }
  json summary;
  summary["nodes"] = run.graph.node_count();
  summary["edges"] = run.graph.edge_count();
  summary["duplicate_edges"] = run.stats.duplicate_edges;
  summary["self_loops"] = run.stats.self_loops;
  summary["train_edges"] = run.split.edges(SplitType::Train).size();
  summary["val_edges"] = run.split.edges(SplitType::Val).size();
  summary["test_edges"] = run.split.edges(SplitType::Test).size();
  auto out = open_output(dir / "split_summary.json");
  out << summary.dump(2) << '\n';
}

void do_tc(const RunConfig& cfg, const LoadedRun& run, const fs::path& dir) {
  std::vector<TCResult> rows;
  for (SplitType type : {SplitType::Train, SplitType::Val, SplitType::Test}) {
    auto part = tc_all(run.graph, run.split, type, cfg.tc,
                       cfg.resolved_worker_count());
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto out = open_output(dir / "tc.csv");
  write_tc_csv(out, run.graph, rows);
}

void do_atc(const RunConfig& cfg, const LoadedRun& run, const fs::path& dir) {
  const auto diffused = diffused_for(cfg, run.graph, run.split);
  {
    auto out = open_output(dir / "embeddings.bin");
    write_embeddings(out, diffused);
  }
  auto out = open_output(dir / "atc.csv");
  out << "node_label,split_type,K,beta,norm,value,method\n";
  for (SplitType type : {SplitType::Train, SplitType::Val, SplitType::Test}) {
    auto values = atc_all(diffused, run.split, type, cfg.atc_phi,
                          cfg.resolved_worker_count());
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << run.graph.label(static_cast<NodeId>(i)) << ','
          << split_type_name(type) << ',' << cfg.atc_hops << ','
          << format_double(cfg.tc.beta) << ',' << similarity_name(cfg.atc_phi)
          << ',' << (values[i] ? format_double(*values[i]) : "NA") << ",atc\n";
    }
  }
}

struct EvalOutput {
  std::vector<MetricReportRow> rows;
  // means[k_index][metric]; counts of contributing nodes
  std::map<std::string, double> aggregate_means;
  std::size_t nodes_evaluated = 0;
  std::size_t nodes_skipped = 0;
};

EvalOutput evaluate_nodes(const RunConfig& cfg, const LoadedRun& run,
                          const EmbeddingMatrix& diffused) {
  const std::size_t n = run.graph.node_count();
  const DiffusionPredictor predictor(diffused);
  EvalOutput out;
  const auto& cutoffs = cfg.eval_cutoffs;

  std::vector<std::vector<MetricValues>> per_node(n);
  std::vector<char> included(n, 0);
  parallel_chunks(n, cfg.resolved_worker_count(),
                  [&](std::size_t begin, std::size_t end) {
                    std::vector<double> scores(n);
                    for (std::size_t i = begin; i < end; ++i) {
                      const NodeId node = static_cast<NodeId>(i);
                      auto truth = run.split.neighbors(SplitType::Test, node);
                      if (truth.empty()) continue;
                      predictor.score_row(node, scores);
                      Ranking r = rank_candidates(scores, node,
                                                  cfg.eval_exclude_train,
                                                  run.split);
                      auto& rows = per_node[i];
                      rows.reserve(cutoffs.size());
                      for (int k : cutoffs) {
                        rows.push_back(node_metrics(r, truth, k));
                      }
                      included[i] = 1;
                    }
                  });

  std::vector<double> sums(cutoffs.size() * 6, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!included[i]) {
      ++out.nodes_skipped;
      continue;
    }
    ++out.nodes_evaluated;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const MetricValues& v = per_node[i][c];
      out.rows.push_back(MetricReportRow{static_cast<NodeId>(i), cutoffs[c], v});
      const double vals[6] = {v.recall, v.precision, v.f1, v.ndcg, v.mrr, v.hits};
      for (int m = 0; m < 6; ++m) sums[c * 6 + m] += vals[m];
    }
  }
  static const char* kMetricNames[6] = {"recall", "precision", "f1",
                                        "ndcg",   "mrr",       "hits"};
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    for (int m = 0; m < 6; ++m) {
      const std::string key =
          std::string(kMetricNames[m]) + "@" + std::to_string(cutoffs[c]);
      out.aggregate_means[key] =
          out.nodes_evaluated > 0
              ? sums[c * 6 + m] / static_cast<double>(out.nodes_evaluated)
              : kMissing;
    }
  }
  return out;
}

void do_eval(const RunConfig& cfg, const LoadedRun& run, const fs::path& dir) {
  const auto diffused = diffused_for(cfg, run.graph, run.split);
  EvalOutput result = evaluate_nodes(cfg, run, diffused);
  {
    auto out = open_output(dir / "metrics.csv");
    write_metric_csv(out, run.graph, result.rows);
  }
  {
    json agg;
    agg["nodes_evaluated"] = result.nodes_evaluated;
    agg["nodes_skipped_empty_truth"] = result.nodes_skipped;
    for (const auto& [key, value] : result.aggregate_means) {
      agg["means"][key] = value;
    }
    auto out = open_output(dir / "metrics_aggregate.json");
    out << agg.dump(2) << '\n';
  }
  if (cfg.eval_negatives > 0) {
    const DiffusionPredictor predictor(diffused);
    const std::size_t n = run.graph.node_count();
    Rng rng(cfg.eval_seed);
    std::vector<double> neg_scores;
    neg_scores.reserve(cfg.eval_negatives);
    while (neg_scores.size() < cfg.eval_negatives) {
      const NodeId u = static_cast<NodeId>(rng.next_below(n));
      const NodeId v = static_cast<NodeId>(rng.next_below(n));
      if (u == v) continue;
      auto nbrs = run.graph.neighbors(u);
      if (std::binary_search(nbrs.begin(), nbrs.end(), v)) continue;
      neg_scores.push_back(predictor.score(u, v));
    }
    std::vector<double> pos_scores;
    for (const Edge& e : run.split.edges(SplitType::Test)) {
      pos_scores.push_back(predictor.score(e.u, e.v));
    }
    auto out = open_output(dir / "link_hits.csv");
    out << "K,hits\n";
    if (!pos_scores.empty()) {
      for (int k : cfg.eval_cutoffs) {
        if (static_cast<std::size_t>(k) > neg_scores.size()) continue;
        out << k << ','
            << format_double(link_hits_at_k(pos_scores, neg_scores, k))
            << '\n';
      }
    }
  }
}

struct TableOutput {
  NodeTable table;
  json manifest;
};

TableOutput build_node_table(const RunConfig& cfg, const LoadedRun& run) {
  const Graph& g = run.graph;
  const EdgeSplit& split = run.split;
  const std::size_t n = g.node_count();
  std::vector<std::string> labels(g.labels().begin(), g.labels().end());
  TableOutput out{NodeTable(std::move(labels)), json::array()};

  auto note = [&out](const std::string& column, const std::string& module,
                     json params) {
    json entry;
    entry["column"] = column;
    entry["module"] = module;
    entry["params"] = std::move(params);
    out.manifest.push_back(std::move(entry));
  };

  static const std::pair<SplitType, const char*> kTypes[] = {
      {SplitType::Train, "tr"}, {SplitType::Val, "val"}, {SplitType::Test, "te"}};

  for (const auto& [type, suffix] : kTypes) {
    std::vector<double> deg(n);
    for (std::size_t i = 0; i < n; ++i) {
      deg[i] = static_cast<double>(split.degree(type, static_cast<NodeId>(i)));
    }
    const std::string name = std::string("degree_") + suffix;
    out.table.add_column(name, std::move(deg));
    note(name, "graph-core",
         json{{"split_seed", cfg.split_seed}});
  }

  {
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) {
      density[i] = subgraph_density(g, split, static_cast<NodeId>(i));
    }
    out.table.add_column("subgraph_density", std::move(density));
    note("subgraph_density", "concentration", json::object());
  }

  for (const auto& [type, suffix] : kTypes) {
    auto results = tc_all(g, split, type, cfg.tc, cfg.resolved_worker_count());
    std::vector<double> col(n, kMissing);
    for (std::size_t i = 0; i < n; ++i) {
      if (results[i].value) col[i] = *results[i].value;
    }
    const std::string name = std::string("tc_") + suffix;
    out.table.add_column(name, std::move(col));
    note(name, "concentration",
         json{{"K", cfg.tc.hops},
              {"beta", cfg.tc.beta},
              {"norm", tc_norm_name(cfg.tc.norm)}});
  }

  const auto diffused = diffused_for(cfg, g, split);
  for (const auto& [type, suffix] : kTypes) {
    auto values = atc_all(diffused, split, type, cfg.atc_phi,
                          cfg.resolved_worker_count());
    std::vector<double> col(n, kMissing);
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i]) col[i] = *values[i];
    }
    const std::string name = std::string("atc_") + suffix;
    out.table.add_column(name, std::move(col));
    note(name, "atc",
         json{{"d", cfg.atc_dim},
              {"K", cfg.atc_hops},
              {"phi", similarity_name(cfg.atc_phi)},
              {"seed", cfg.atc_seed}});
  }

  EvalOutput eval = evaluate_nodes(cfg, run, diffused);
  static const char* kMetricNames[6] = {"recall", "precision", "f1",
                                        "ndcg",   "mrr",       "hits"};
  for (std::size_t c = 0; c < cfg.eval_cutoffs.size(); ++c) {
    for (int m = 0; m < 6; ++m) {
      std::vector<double> col(n, kMissing);
      for (const auto& row : eval.rows) {
        if (row.cutoff != cfg.eval_cutoffs[c]) continue;
        const MetricValues& v = row.values;
        const double vals[6] = {v.recall, v.precision, v.f1,
                                v.ndcg,   v.mrr,       v.hits};
        col[static_cast<std::size_t>(row.node)] = vals[m];
      }
      const std::string name = std::string(kMetricNames[m]) + "@" +
                               std::to_string(cfg.eval_cutoffs[c]);
      out.table.add_column(name, std::move(col));
      note(name, "lp-eval",
           json{{"K", cfg.eval_cutoffs[c]},
                {"exclude_train", cfg.eval_exclude_train},
                {"predictor", "diffusion-dot"},
                {"seed", cfg.atc_seed}});
    }
  }
  return out;
}

void write_correlation_csv(std::ostream& out, const RunConfig& cfg,
                           const NodeTable& table) {
  out << "metric,against";
  for (int k : cfg.eval_cutoffs) out << ",r@" << k;
  out << ",absolute_avg,basic_avg\n";
  static const char* kMetricNames[6] = {"recall", "precision", "f1",
                                        "ndcg",   "mrr",       "hits"};
  for (const char* metric : kMetricNames) {
    out << metric << ',' << cfg.correlate_against;
    try {
      auto report = correlation_report(table, metric, cfg.eval_cutoffs,
                                       cfg.correlate_against);
      for (double r : report.per_cutoff_r) out << ',' << format_double(r);
      out << ',' << format_double(report.absolute_avg) << ','
          << format_double(report.basic_avg) << '\n';
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedStatistic) throw;
      for (std::size_t i = 0; i < cfg.eval_cutoffs.size() + 2; ++i) out << ",NA";
      out << '\n';
    }
  }
}

void do_correlate(const RunConfig& cfg, const LoadedRun& run,
                  const fs::path& dir) {
  TableOutput built = build_node_table(cfg, run);
  {
    auto out = open_output(dir / "node_table.csv");
    built.table.write_csv(out);
  }
  {
    auto out = open_output(dir / "node_table_manifest.json");
    out << built.manifest.dump(2) << '\n';
  }
  auto out = open_output(dir / "correlation.csv");
  write_correlation_csv(out, cfg, built.table);
}

void do_tds(const RunConfig& cfg, const LoadedRun& run, const fs::path& dir,
            const NodeTable* prebuilt) {
  std::optional<TableOutput> local;
  const NodeTable* table = prebuilt;
  if (!table) {
    const Graph& g = run.graph;
    std::vector<std::string> labels(g.labels().begin(), g.labels().end());
    local.emplace(TableOutput{NodeTable(std::move(labels)), json::array()});
    for (const auto& [type, suffix] :
         {std::pair{SplitType::Val, "val"}, std::pair{SplitType::Test, "te"}}) {
      auto results = tc_all(g, run.split, type, cfg.tc,
                            cfg.resolved_worker_count());
      std::vector<double> col(g.node_count(), kMissing);
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (results[i].value) col[i] = *results[i].value;
      }
      local->table.add_column(std::string("tc_") + suffix, std::move(col));
    }
    table = &local->table;
  }
  TdsReport report = tds_report(*table);
  {
    auto out = open_output(dir / "tds_per_node.csv");
    out << "node_label,tc_val,tc_te,shift\n";
    const auto val = table->column("tc_val");
    const auto te = table->column("tc_te");
    for (std::size_t i = 0; i < report.shift.size(); ++i) {
      out << run.graph.label(static_cast<NodeId>(i)) << ','
          << format_double(val[i]) << ',' << format_double(te[i]) << ','
          << format_double(report.shift[i]) << '\n';
    }
  }
  json summary;
  summary["included"] = report.included;
  summary["excluded"] = report.excluded;
  summary["mean"] = report.mean;
  summary["median"] = report.median;
  for (int dec = 1; dec <= 9; ++dec) {
    summary["deciles"]["q" + std::to_string(dec * 10)] = report.deciles[dec - 1];
  }
  auto out = open_output(dir / "tds_summary.json");
  out << summary.dump(2) << '\n';
}

void do_reweight(const RunConfig& cfg, const LoadedRun& run,
                 const fs::path& dir) {
  ReweightConfig rw = cfg.reweight;
  rw.workers = cfg.resolved_worker_count();
  if (cfg.reweight_domain == "full") {
    rw.domain = SoftmaxDomain::Full;
  } else if (cfg.reweight_domain == "neighbors") {
    rw.domain = SoftmaxDomain::Neighbors;
  }
  auto outcome =
      run_reweighting(run.graph, run.split, dot_product_scorer(), rw);
  {
    auto out = open_output(dir / "reweighted_adjacency.csv");
    write_adjacency_csv(out, run.graph, outcome.state.adj);
  }
  auto out = open_output(dir / "reweight_trace.csv");
  write_trace_csv(out, outcome.trace);
}

void do_bias_oracle(const RunConfig& cfg, const fs::path& dir) {
  BiasOracle oracle{cfg.bias_universe, cfg.bias_cutoff, cfg.bias_truth};
  const auto expected = expected_metrics_untrained(oracle);
  const auto sim = simulate_untrained(oracle, cfg.bias_trials, cfg.bias_seed,
                                      cfg.resolved_worker_count());
  auto out = open_output(dir / "bias_oracle.csv");
  out << "N,K,E_size,metric,analytic,empirical,stderr\n";
  auto row = [&](const char* metric, double analytic, double empirical,
                 double se) {
    out << cfg.bias_universe << ',' << cfg.bias_cutoff << ',' << cfg.bias_truth
        << ',' << metric << ',';
    if (std::isnan(analytic)) {
      out << "NA";
    } else {
      out << format_double(analytic);
    }
    out << ',' << format_double(empirical) << ',' << format_double(se) << '\n';
  };
  row("recall", expected.recall, sim.mean.recall, sim.stderr_of_mean.recall);
  row("precision", expected.precision, sim.mean.precision,
      sim.stderr_of_mean.precision);
  row("f1", expected.f1, sim.mean.f1, sim.stderr_of_mean.f1);
  row("ndcg", expected.ndcg, sim.mean.ndcg, sim.stderr_of_mean.ndcg);
  double inter_mean = 0.0;
  double inter_sq = 0.0;
  for (std::size_t i = 0; i < sim.intersection_histogram.size(); ++i) {
    const double x = static_cast<double>(i);
    const double c = static_cast<double>(sim.intersection_histogram[i]);
    inter_mean += x * c;
    inter_sq += x * x * c;
  }
  const double trials = static_cast<double>(sim.trials);
  inter_mean /= trials;
  const double inter_var =
      trials > 1 ? std::max(0.0, (inter_sq - trials * inter_mean * inter_mean) /
                                     (trials - 1))
                 : 0.0;
  row("intersection", expected.intersection, inter_mean,
      std::sqrt(inter_var / trials));
  row("mrr", kMissing, sim.mean.mrr, sim.stderr_of_mean.mrr);
  row("hits", kMissing, sim.mean.hits, sim.stderr_of_mean.hits);
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"split", "tc",  "atc",       "eval",    "bias-oracle",
          "correlate", "tds", "reweight", "pipeline"};
}

void run_subcommand(const std::string& name, RunConfig cfg) {
  cfg.workers = cfg.resolved_worker_count();
  const fs::path dir = cfg.resolved_output();
  std::error_code ec;
  fs::create_directories(dir, ec);
  {
    auto out = open_output(dir / "resolved_config.txt");
    write_config(out, cfg);
  }
  if (name == "bias-oracle") {
    do_bias_oracle(cfg, dir);
    return;
  }
  LoadedRun run = load_run(cfg);
  if (name == "split") {
    do_split(run, dir);
  } else if (name == "tc") {
    do_tc(cfg, run, dir);
  } else if (name == "atc") {
    do_atc(cfg, run, dir);
  } else if (name == "eval") {
    do_eval(cfg, run, dir);
  } else if (name == "correlate") {
    do_correlate(cfg, run, dir);
  } else if (name == "tds") {
    do_tds(cfg, run, dir, nullptr);
  } else if (name == "reweight") {
    do_reweight(cfg, run, dir);
  } else if (name == "pipeline") {
    do_split(run, dir);
    do_tc(cfg, run, dir);
    do_atc(cfg, run, dir);
    do_eval(cfg, run, dir);
    TableOutput built = build_node_table(cfg, run);
    {
      auto out = open_output(dir / "node_table.csv");
      built.table.write_csv(out);
    }
    {
      auto out = open_output(dir / "node_table_manifest.json");
      out << built.manifest.dump(2) << '\n';
    }
    {
      auto out = open_output(dir / "correlation.csv");
      write_correlation_csv(out, cfg, built.table);
    }
    do_tds(cfg, run, dir, &built.table);
  } else {
    throw Error(ErrorKind::Config, "unknown subcommand '" + name + "'");
  }
}

}  // namespace topoconc
