#include "bdris/ris_config.hpp"

#include "bdris/errors.hpp"

namespace bdris {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Reflective: return "reflective";
    case Mode::Hybrid: return "hybrid";
    case Mode::MultiSector: return "multisector";
  }
  return "?";
}

std::string to_string(Architecture a) {
  switch (a) {
    case Architecture::SingleConnected: return "single";
    case Architecture::GroupConnected: return "group";
    case Architecture::FullyConnected: return "fully";
    case Architecture::DynamicGroupConnected: return "dynamic_group";
    case Architecture::NonDiagonal: return "non_diagonal";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "reflective") return Mode::Reflective;
  if (s == "hybrid") return Mode::Hybrid;
  if (s == "multisector") return Mode::MultiSector;
  throw ConfigError("unknown mode '" + s + "'");
}

Architecture architecture_from_string(const std::string& s) {
  if (s == "single") return Architecture::SingleConnected;
  if (s == "group") return Architecture::GroupConnected;
  if (s == "fully") return Architecture::FullyConnected;
  if (s == "dynamic_group") return Architecture::DynamicGroupConnected;
  if (s == "non_diagonal") return Architecture::NonDiagonal;
  throw ConfigError("unknown architecture '" + s + "'");
}

int RisConfig::group_antennas() const {
  switch (architecture) {
    case Architecture::SingleConnected: return sectors;
    case Architecture::FullyConnected: return M;
    case Architecture::GroupConnected:
    case Architecture::DynamicGroupConnected: return group_size;
    case Architecture::NonDiagonal: return 2;
  }
  return 0;
}

void RisConfig::validate() const {
  if (M <= 0) throw ConfigError("M must be positive");
  if (sectors <= 0) throw ConfigError("sector count must be positive");
  if (mode == Mode::Reflective && sectors != 1)
    throw ConfigError("reflective mode has exactly 1 sector");
  if (mode == Mode::Hybrid && sectors != 2)
    throw ConfigError("hybrid mode has exactly 2 sectors");
  if (mode == Mode::MultiSector && sectors < 2)
    throw ConfigError("multisector mode requires L >= 2");
  if (M % sectors != 0) throw ConfigError("L must divide M");
  if (architecture == Architecture::GroupConnected ||
      architecture == Architecture::DynamicGroupConnected) {
    if (group_size <= 0) throw ConfigError("group_size must be positive");
    if (M % group_size != 0) throw ConfigError("group_size must divide M");
    if (group_size % sectors != 0)
      throw ConfigError("L must divide group_size");
  }
  if (architecture == Architecture::NonDiagonal) {
    if (mode != Mode::Reflective)
      throw ConfigError("non-diagonal architecture requires reflective mode");
    if (M % 2 != 0)
      throw ConfigError("non-diagonal architecture requires even M");
  }
}

RisConfig RisConfig::canonical() const {
  RisConfig c = *this;
  if (architecture == Architecture::SingleConnected) {
    c.architecture = Architecture::GroupConnected;
    c.group_size = sectors;
  } else if (architecture == Architecture::FullyConnected) {
    c.architecture = Architecture::GroupConnected;
    c.group_size = M;
  }
  return c;
}

RisConfig reflective(int M, Architecture arch, int group_size) {
  RisConfig c{M, Mode::Reflective, 1, arch, group_size};
  c.validate();
  return c;
}

RisConfig hybrid(int M, Architecture arch, int group_size) {
  RisConfig c{M, Mode::Hybrid, 2, arch, group_size};
  c.validate();
  return c;
}

RisConfig multi_sector(int M, int L, Architecture arch, int group_size) {
  RisConfig c{M, Mode::MultiSector, L, arch, group_size};
  c.validate();
  return c;
}

long circuit_complexity(const RisConfig& config) {
  config.validate();
  if (config.architecture == Architecture::NonDiagonal ||
      config.architecture == Architecture::DynamicGroupConnected) {
    throw UnsupportedArchitectureError(
        "circuit complexity undefined for " + to_string(config.architecture));
  }
  // All five families reduce to (group_antennas + 1) * M / 2: an n-port
  // fully-connected network needs n(n+1)/2 components and there are M/n
  // groups, so the total is (M/n) * n(n+1)/2 = (n+1)M/2.
  const long M = config.M;
  const long n = config.group_antennas();
  return (n + 1) * M / 2;
}

}  // namespace bdris
