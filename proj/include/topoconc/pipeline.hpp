#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoconc/atc.hpp"
#include "topoconc/concentration.hpp"
#include "topoconc/reweight.hpp"
#include "topoconc/split.hpp"

namespace topoconc {

// Every knob of a run, serializable to a flat key=value file. The resolved
// copy written next to the outputs replays the run byte-identically for a
// fixed worker count.
struct RunConfig {
  std::string input;
  std::string output;  // empty: $TOPOCONC_OUTPUT_ROOT, else "."
  int workers = 0;     // 0: available parallelism

  SplitRatios ratios;
  SplitStrategy strategy = SplitStrategy::Random;
  std::uint64_t split_seed = 1;

  TcParams tc;

  std::size_t atc_dim = 64;
  int atc_hops = 2;
  Similarity atc_phi = Similarity::Cosine;
  std::uint64_t atc_seed = 7;
  VarianceMode atc_variance = VarianceMode::InverseDim;
  std::vector<double> atc_alpha;  // empty: beta^{k-1} from tc.beta

  std::vector<int> eval_cutoffs{5, 10, 20, 50};
  bool eval_exclude_train = true;
  std::size_t eval_negatives = 0;
  std::uint64_t eval_seed = 71;

  ReweightConfig reweight;
  std::string reweight_domain = "auto";  // auto|full|neighbors

  std::int64_t bias_universe = 100;
  int bias_cutoff = 10;
  std::int64_t bias_truth = 5;
  std::int64_t bias_trials = 200000;
  std::uint64_t bias_seed = 13;

  std::string correlate_against = "tc_tr";

  // Sorted key=value entries; parse and apply round-trip.
  std::vector<std::pair<std::string, std::string>> entries() const;
  void set(const std::string& key, const std::string& value);
  static RunConfig from_file(const std::string& path);

  std::string resolved_output() const;
  int resolved_worker_count() const;
};

void write_config(std::ostream& out, const RunConfig& cfg);

// Subcommand names accepted by run_subcommand.
std::vector<std::string> subcommand_names();

// Executes one subcommand, writing its artifacts plus the resolved config
// into the output directory. Throws Error on failure.
void run_subcommand(const std::string& name, RunConfig cfg);

}  // namespace topoconc
