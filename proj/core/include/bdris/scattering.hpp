#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bdris/ris_config.hpp"
#include "bdris/rng.hpp"

namespace bdris {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// The unified representation of the scattering configuration. Block g is the
// vertical stack [Phi_1; ...; Phi_L] restricted to group g's cells: a tall
// (L*K_g) x K_g matrix with orthonormal columns, which is exactly the
// feasibility condition sum_l Phi_l^H Phi_l = I.
struct ScatteringState {
  RisConfig config;
  std::vector<CMatrix> blocks;
  // DynamicGroupConnected only: cell_permutation[g*K_g + r] is the cell index
  // occupying slot r of group g.
  std::vector<int> cell_permutation;
  // NonDiagonal only: pairing_sigma is a fixed-point-free involution over
  // antennas; Phi[sigma[i], i] = exp(j * pairing_theta[i]).
  std::vector<int> pairing_sigma;
  std::vector<double> pairing_theta;
};

struct ValidationIssue {
  std::string invariant;
  double deviation = 0.0;
};

struct ValidationReport {
  bool pass = true;
  double max_deviation = 0.0;
  std::vector<ValidationIssue> violations;
};

// Checks every state invariant against `tol` (deviations are max-abs).
// Throws ShapeError when dimensions contradict the config.
ValidationReport validate(const ScatteringState& state, double tol);

// Haar-uniform feasible state (per block); uniformly random fixed-point-free
// pairing with i.i.d. uniform phases for NonDiagonal; uniformly random cell
// permutation for DynamicGroup.
ScatteringState random_feasible(const RisConfig& config, Rng& rng);

// Frobenius-nearest feasible blocks via the polar factor (thin SVD U W^H).
// Permutation/pairing data cannot be expressed as raw blocks, so the overload
// taking `like` copies them through unchanged; the config-only overload is
// for architectures without such data. Throws RankDeficientError when a raw
// block has numerically deficient column rank.
ScatteringState project(const RisConfig& config,
                        const std::vector<CMatrix>& raw_blocks);
ScatteringState project(const ScatteringState& like,
                        const std::vector<CMatrix>& raw_blocks);

// Assembles the L effective matrices Phi_l (M_s x M_s each) from the blocks,
// scattering rows into the architecture's sparsity pattern.
std::vector<CMatrix> effective_matrices(const ScatteringState& state);

// Snaps each diagonal phase to the nearest of 2^bits uniformly spaced
// phases. Reflective single-connected only.
ScatteringState quantize_phases(const ScatteringState& state, int bits);

// Debug dump: one section per effective matrix, rows of comma-separated
// "re+imj" entries.
std::string dump(const ScatteringState& state);

}  // namespace bdris
