#pragma once

#include <string>

namespace bdris {

// Antenna-arrangement mode. Reflective serves one half-space (L = 1 sector),
// Hybrid serves both half-spaces (L = 2), MultiSector splits full space into
// L >= 2 sectors. Hybrid and MultiSector(2) share the same mathematics but
// are kept distinct as labels.
enum class Mode { Reflective, Hybrid, MultiSector };

enum class Architecture {
  SingleConnected,
  GroupConnected,
  FullyConnected,
  DynamicGroupConnected,
  NonDiagonal,
};

std::string to_string(Mode m);
std::string to_string(Architecture a);
Mode mode_from_string(const std::string& s);
Architecture architecture_from_string(const std::string& s);

// A point in the classification tree: element count, mode (sector count L),
// inter-cell architecture and group size. group_size is measured in
// antennas and is meaningful for Group/DynamicGroup; Single and Fully are
// canonicalized to group sizes L and M respectively.
struct RisConfig {
  int M = 0;
  Mode mode = Mode::Reflective;
  int sectors = 1;  // L; 1 for Reflective, 2 for Hybrid, >= 2 for MultiSector
  Architecture architecture = Architecture::SingleConnected;
  int group_size = 0;  // antennas per group (Group/DynamicGroup only)

  int cells() const { return M / sectors; }
  int sector_size() const { return M / sectors; }

  // Group size in antennas after canonicalization (Single -> L, Fully -> M).
  int group_antennas() const;
  // Cells per group, K_g = group_antennas / L.
  int group_cells() const { return group_antennas() / sectors; }
  // Number of groups, G = M / group_antennas.
  int num_groups() const { return M / group_antennas(); }

  // Throws ConfigError if any structural invariant is violated.
  void validate() const;

  // Equivalent GroupConnected form (identity for Group/DynamicGroup/NonDiagonal).
  RisConfig canonical() const;

  bool operator==(const RisConfig&) const = default;
};

RisConfig reflective(int M, Architecture arch, int group_size = 0);
RisConfig hybrid(int M, Architecture arch, int group_size = 0);
RisConfig multi_sector(int M, int L, Architecture arch, int group_size = 0);

// Number of reconfigurable impedance components for the nine mode/architecture
// combinations; throws UnsupportedArchitectureError for NonDiagonal and
// DynamicGroup, which have no defined count.
long circuit_complexity(const RisConfig& config);

}  // namespace bdris
