#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "topoconc/error.hpp"
#include "topoconc/pipeline.hpp"

namespace {

using topoconc::Error;
using topoconc::ErrorKind;
using topoconc::RunConfig;

// Exit codes, also listed in --help: 0 success, 1 internal error, 2 config
// problem, 3 missing input or unwritable output, 4 schema mismatch,
// 5 invalid parameter or undefined statistic, 6 malformed edge list.
int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::MissingInput: return 3;
    case ErrorKind::Schema: return 4;
    case ErrorKind::Parse: return 6;
    case ErrorKind::EmptyGraph:
    case ErrorKind::InvalidParameter:
    case ErrorKind::InvalidRatio:
    case ErrorKind::MissingTimestamp:
    case ErrorKind::InvalidWeights:
    case ErrorKind::InvalidScores:
    case ErrorKind::NotFound:
    case ErrorKind::UndefinedStatistic: return 5;
  }
  return 1;
}

void report_error(const std::string& kind, const std::string& message,
                  int code) {
  nlohmann::json err;
  err["error"] = kind;
  err["message"] = message;
  err["exit_code"] = code;
  std::cerr << err.dump() << '\n';
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg,
                      std::string& config_path) {
  cmd->add_option("-c,--config", config_path,
                  "Key=value config file; flags override its entries");
  cmd->add_option("-i,--input", cfg.input, "Edge list: src dst [timestamp]");
  cmd->add_option("-o,--output", cfg.output,
                  "Output directory (default: $TOPOCONC_OUTPUT_ROOT or .)");
  cmd->add_option("-w,--workers", cfg.workers,
                  "Worker threads; 0 = available parallelism")
      ->capture_default_str();
  cmd->add_option("--split-train", cfg.ratios.train, "Train edge fraction")
      ->capture_default_str();
  cmd->add_option("--split-val", cfg.ratios.val, "Validation edge fraction")
      ->capture_default_str();
  cmd->add_option("--split-test", cfg.ratios.test, "Test edge fraction")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--split-strategy",
         [&cfg](const std::string& v) { cfg.set("split.strategy", v); },
         "random or temporal (default random)")
      ->check(CLI::IsMember({"random", "temporal"}));
  cmd->add_option("--split-seed", cfg.split_seed, "Split permutation seed")
      ->capture_default_str();
  cmd->add_option("--tc-k", cfg.tc.hops, "TC hop count K")
      ->capture_default_str();
  cmd->add_option("--tc-beta", cfg.tc.beta, "TC hop discount in (0,1]")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--tc-norm", [&cfg](const std::string& v) { cfg.set("tc.norm", v); },
         "Intersection normalization: product, source, or min (default product)")
      ->check(CLI::IsMember({"product", "source", "min"}));
  cmd->add_option("--atc-dim", cfg.atc_dim, "Embedding dimension d")
      ->capture_default_str();
  cmd->add_option("--atc-k", cfg.atc_hops, "Diffusion hop count")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--atc-phi", [&cfg](const std::string& v) { cfg.set("atc.phi", v); },
         "Similarity: cosine or dot (default cosine)")
      ->check(CLI::IsMember({"cosine", "dot"}));
  cmd->add_option("--atc-seed", cfg.atc_seed, "Random projection seed")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--atc-variance",
         [&cfg](const std::string& v) { cfg.set("atc.variance", v); },
         "Entry variance: inv_dim or unit (default inv_dim)")
      ->check(CLI::IsMember({"inv_dim", "unit"}));
  cmd->add_option_function<std::string>(
         "--atc-alpha",
         [&cfg](const std::string& v) { cfg.set("atc.alpha", v); },
         "Comma list of per-hop weights (default beta^(k-1))");
  cmd->add_option_function<std::string>(
         "--eval-ks", [&cfg](const std::string& v) { cfg.set("eval.ks", v); },
         "Comma list of cutoffs (default 5,10,20,50)");
  cmd->add_flag("--eval-exclude-train,!--eval-keep-train",
                cfg.eval_exclude_train,
                "Drop train neighbors from candidate lists (default on)");
  cmd->add_option("--eval-negatives", cfg.eval_negatives,
                  "Sampled negatives for link-centric Hits@K; 0 disables")
      ->capture_default_str();
  cmd->add_option("--eval-seed", cfg.eval_seed, "Negative sampling seed")
      ->capture_default_str();
  cmd->add_option("--reweight-iterations", cfg.reweight.iterations,
                  "Reweighting iterations T")
      ->capture_default_str();
  cmd->add_option("--reweight-interval", cfg.reweight.update_interval,
                  "Apply an update every this many iterations")
      ->capture_default_str();
  cmd->add_option("--reweight-warmup", cfg.reweight.warmup,
                  "Iterations before the first update")
      ->capture_default_str();
  cmd->add_option("--reweight-gamma", cfg.reweight.gamma,
                  "Additive update coefficient")
      ->capture_default_str();
  cmd->add_option("--reweight-dim", cfg.reweight.dim,
                  "Embedding dimension inside reweighting")
      ->capture_default_str();
  cmd->add_option("--reweight-k", cfg.reweight.diffusion_hops,
                  "Diffusion hops inside reweighting")
      ->capture_default_str();
  cmd->add_option("--reweight-beta", cfg.reweight.beta,
                  "Diffusion discount inside reweighting")
      ->capture_default_str();
  cmd->add_option("--reweight-seed", cfg.reweight.seed,
                  "Reweighting projection seed")
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--reweight-domain",
         [&cfg](const std::string& v) { cfg.set("reweight.domain", v); },
         "Softmax domain: auto, full, or neighbors (default auto: full for "
         "n <= 10000)")
      ->check(CLI::IsMember({"auto", "full", "neighbors"}));
  cmd->add_flag("--reweight-renormalize", cfg.reweight.renormalize,
                "Row-renormalize after each update (default off)");
  cmd->add_option("--bias-n", cfg.bias_universe, "Bias oracle universe N")
      ->capture_default_str();
  cmd->add_option("--bias-k", cfg.bias_cutoff, "Bias oracle cutoff K")
      ->capture_default_str();
  cmd->add_option("--bias-e", cfg.bias_truth, "Bias oracle truth size")
      ->capture_default_str();
  cmd->add_option("--bias-trials", cfg.bias_trials, "Monte-Carlo trials")
      ->capture_default_str();
  cmd->add_option("--bias-seed", cfg.bias_seed, "Monte-Carlo seed")
      ->capture_default_str();
  cmd->add_option("--correlate-against", cfg.correlate_against,
                  "Topology column correlated with each metric")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "topoconc: topological concentration analytics for link prediction "
      "graphs"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 internal error, 2 config problem, 3 missing "
      "input/output, 4 schema mismatch, 5 invalid parameter, 6 malformed "
      "edge list.");

  RunConfig cfg;
  std::string config_path;
  std::string chosen;
  for (const auto& name : topoconc::subcommand_names()) {
    static const std::map<std::string, std::string> kDescriptions = {
        {"split", "Load, split, and export edges plus the label map"},
        {"tc", "Exact topological concentration per node and split type"},
        {"atc", "Approximated TC via random projection diffusion"},
        {"eval", "Node-centric ranking metrics for the diffusion predictor"},
        {"bias-oracle",
         "Analytic vs Monte-Carlo untrained-predictor expectations"},
        {"correlate", "Node table plus metric/topology Pearson correlations"},
        {"tds", "Topological distribution shift between val and test"},
        {"reweight", "TC-raising additive edge reweighting"},
        {"pipeline", "split, tc, atc, eval, correlate, and tds in sequence"},
    };
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    add_common_flags(sub, cfg, config_path);
    sub->callback([&chosen, name] { chosen = name; });
  }

  // Two passes: the first only discovers --config so file entries load
  // before flag overrides are applied on the second.
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error("config", e.what(), 2);
    return 2;
  }
  if (!config_path.empty()) {
    try {
      cfg = RunConfig::from_file(config_path);
    } catch (const Error& e) {
      const int code = exit_code_for(e.kind());
      report_error(error_kind_name(e.kind()), e.what(), code);
      return code;
    }
    try {
      app.clear();
      chosen.clear();
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      report_error("config", e.what(), 2);
      return 2;
    }
  }

  try {
    topoconc::run_subcommand(chosen, cfg);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report_error(error_kind_name(e.kind()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error("internal", e.what(), 1);
    return 1;
  }
  return 0;
}
