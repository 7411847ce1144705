#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/optimizer.hpp"
#include "bdris/ris_config.hpp"

namespace bdris {

// What a sweep point records per trial: an optimized sum-rate, or (for the
// power-gain study) the closed-form received power of the architecture.
enum class Metric { SumRate, PowerOracle };

// Nested mode runs each trial's sweep points in order and, whenever the
// previous point's feasible set embeds into the current one (same M and L,
// group size dividing), starts the richer run from the transferred solution.
enum class WarmStart { None, Nested };

struct SweepEntry {
  std::vector<int> m_values;
  Mode mode = Mode::Reflective;
  int sectors = 0;  // 0: inferred from mode (reflective 1, hybrid 2)
  Architecture architecture = Architecture::SingleConnected;
  int group_size = 0;  // antennas per group; group architectures only

  RisConfig config_for(int m) const;
};

struct ExperimentSpec {
  SceneConfig scene;
  std::vector<SweepEntry> sweeps;
  int trials = 10;
  std::uint64_t master_seed = 1;
  OptimizerParams params;
  std::string output_path;
  Metric metric = Metric::SumRate;
  WarmStart warm_start = WarmStart::None;

  void validate() const;
  // One point per (sweep entry, M value), entry-major.
  std::vector<RisConfig> expand() const;
};

struct SweepPointResult {
  RisConfig config;
  std::vector<double> rates;
  std::vector<std::uint64_t> seeds;
  std::vector<int> iterations;
  std::vector<double> wall_ms;
  double mean_rate = 0.0;
  double std_rate = 0.0;
  double ci95_halfwidth = 0.0;
  std::string error;  // nonempty: point aborted, statistics absent
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<SweepPointResult> points;

  bool any_failed() const;
};

// Strict parsers: unknown keys anywhere in the document are ConfigErrors.
ExperimentSpec parse_spec(const std::string& json_text);
ExperimentSpec load_spec(const std::string& path);
std::string spec_to_json(const ExperimentSpec& spec);

// Channels are seeded by (master, M, L, trial) so that every architecture
// sharing a propagation geometry sees the identical realization in trial t;
// optimizer randomness is seeded by (master, sweep index, trial).
std::uint64_t channel_seed(std::uint64_t master, int m, int sectors,
                           int trial);

ExperimentResult run(const ExperimentSpec& spec, int threads = 1);

// Writes trials.csv, aggregate.csv and result.json under out_dir.
void write_results(const ExperimentResult& result, const std::string& out_dir);
std::string trials_csv(const ExperimentResult& result);
std::string aggregate_csv(const ExperimentResult& result);
std::string result_json(const ExperimentResult& result);

ExperimentSpec preset_fig3(const std::string& side);  // reflective | fullspace
ExperimentSpec preset_power_gain();
std::string complexity_table_csv(int m = 32);

}  // namespace bdris
