#pragma once

#include <utility>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/ris_config.hpp"
#include "bdris/rng.hpp"
#include "bdris/scattering.hpp"

namespace bdris {

struct Precoder {
  CMatrix W;  // N x K, column k serves user k
};

struct OptimizerParams {
  int max_outer_iterations = 60;
  double rel_tolerance = 1e-4;
  double initial_step = 1.0;
  double shrink = 0.5;
  double sufficient_increase = 1e-4;
  int inner_steps = 10;

  void validate() const;
};

struct SolveResult {
  std::vector<double> rate_trajectory;  // bits/s/Hz per accepted outer iter
  ScatteringState final_state;
  Precoder final_precoder;
  int iterations_used = 0;
};

struct Pairing {
  std::vector<int> sigma;
  std::vector<double> theta;
};

// Effective channel seen by each user: column k is (h_k^H Phi_{l_k} G)^H.
CMatrix effective_channels(const ChannelRealization& ch,
                           const ScatteringState& state);

double sum_rate(const ChannelRealization& ch, const ScatteringState& state,
                const Precoder& W);

// Weighted-MMSE step; never loses more than 1e-9 of rate versus the input.
Precoder precoder_update(const ChannelRealization& ch,
                         const ScatteringState& state, const Precoder& W,
                         double tx_power, double noise_power);

// Projected-gradient ascent over the blocks; permutation and pairing are held
// fixed. Returns the input state when no improving step exists.
ScatteringState ris_update(const ChannelRealization& ch,
                           const ScatteringState& state, const Precoder& W,
                           const OptimizerParams& params);

// Cell permutation for dynamic grouping. The exhaustive mode enumerates all
// equal partitions (cells <= 8) and maximizes the same closed-form surrogate
// the greedy targets.
std::vector<int> select_grouping(const ChannelRealization& ch,
                                 const RisConfig& config, const Precoder& W,
                                 bool exhaustive = false);

// All partitions of {0..cells-1} into groups of group_cells, each encoded as
// a cell permutation (slot g*group_cells+r holds the cell in that slot).
std::vector<std::vector<int>> equal_partitions(int cells, int group_cells);

// Max-weight fixed-point-free pairing for a single user, with co-phasing.
Pairing pair_antennas(const ChannelRealization& ch, const RisConfig& config);

SolveResult solve(const ChannelRealization& ch, const RisConfig& config,
                  const SceneConfig& scene, const OptimizerParams& params,
                  Rng& rng);

// Same loop started from a given state and precoder instead of random ones.
SolveResult solve_warm(const ChannelRealization& ch, const RisConfig& config,
                       const SceneConfig& scene, const OptimizerParams& params,
                       ScatteringState init_state, Precoder init_precoder);

// Re-expresses a solution in another architecture with the same (M, L):
// gathers the target's blocks from the source's effective matrices, then
// projects. When the source feasible set is contained in the target's, the
// transfer is exact and preserves every rate.
ScatteringState transfer_state(const ScatteringState& source,
                               const RisConfig& target);

// Closed-form single-user references. Received power, not rate.
double oracle_power_fully(const ChannelRealization& ch, double tx_power);
double oracle_power_single_los(const ChannelRealization& ch, double tx_power);

}  // namespace bdris
