#include "bdris/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>

#include "bdris/errors.hpp"

namespace bdris {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

bool has_blocks(const RisConfig& c) {
  return c.architecture != Architecture::NonDiagonal;
}

void check_shapes(const ScatteringState& s) {
  const RisConfig& c = s.config;
  c.validate();
  if (!has_blocks(c)) {
    if (!s.blocks.empty())
      throw ShapeError("non-diagonal state carries no blocks");
    if (static_cast<int>(s.pairing_sigma.size()) != c.M ||
        static_cast<int>(s.pairing_theta.size()) != c.M)
      throw ShapeError("pairing data must have M entries");
    return;
  }
  const int G = c.num_groups();
  const int Kg = c.group_cells();
  if (static_cast<int>(s.blocks.size()) != G)
    throw ShapeError("expected " + std::to_string(G) + " blocks, got " +
                     std::to_string(s.blocks.size()));
  for (const CMatrix& V : s.blocks) {
    if (V.rows() != static_cast<Eigen::Index>(c.sectors) * Kg ||
        V.cols() != Kg)
      throw ShapeError("block shape mismatch");
  }
  const bool dynamic = c.architecture == Architecture::DynamicGroupConnected;
  if (dynamic && static_cast<int>(s.cell_permutation.size()) != c.cells())
    throw ShapeError("cell_permutation must list every cell");
  if (!dynamic && !s.cell_permutation.empty())
    throw ShapeError("cell_permutation only valid for dynamic grouping");
}

bool is_permutation(const std::vector<int>& p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || v >= static_cast<int>(p.size()) || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

// Maps (group, slot) to a cell index, honoring the permutation if present.
inline int cell_of(const ScatteringState& s, int group, int slot) {
  const int Kg = s.config.group_cells();
  return s.cell_permutation.empty() ? group * Kg + slot
                                    : s.cell_permutation[group * Kg + slot];
}

}  // namespace

ValidationReport validate(const ScatteringState& state, double tol) {
  check_shapes(state);
  ValidationReport report;
  auto record = [&](const std::string& what, double dev) {
    report.max_deviation = std::max(report.max_deviation, dev);
    if (dev > tol) {
      report.pass = false;
      report.violations.push_back({what, dev});
    }
  };

  const RisConfig& c = state.config;
  if (c.architecture == Architecture::NonDiagonal) {
    bool ok = is_permutation(state.pairing_sigma);
    for (int i = 0; ok && i < c.M; ++i) {
      if (state.pairing_sigma[i] == i ||
          state.pairing_sigma[state.pairing_sigma[i]] != i)
        ok = false;
    }
    record("pairing is a fixed-point-free involution", ok ? 0.0 : 1.0);
    return report;
  }

  for (size_t g = 0; g < state.blocks.size(); ++g) {
    const CMatrix& V = state.blocks[g];
    CMatrix gram = V.adjoint() * V;
    gram -= CMatrix::Identity(V.cols(), V.cols());
    record("block " + std::to_string(g) + " has orthonormal columns",
           gram.cwiseAbs().maxCoeff());
  }
  if (c.architecture == Architecture::DynamicGroupConnected) {
    record("cell_permutation is a permutation",
           is_permutation(state.cell_permutation) ? 0.0 : 1.0);
  }
  return report;
}

ScatteringState random_feasible(const RisConfig& config, Rng& rng) {
  config.validate();
  ScatteringState s;
  s.config = config;

  if (config.architecture == Architecture::NonDiagonal) {
    s.pairing_sigma.assign(config.M, -1);
    std::vector<int> pool(config.M);
    std::iota(pool.begin(), pool.end(), 0);
    while (!pool.empty()) {
      int i = pool.front();
      pool.erase(pool.begin());
      size_t pick = static_cast<size_t>(rng.below(pool.size()));
      int j = pool[pick];
      pool.erase(pool.begin() + pick);
      s.pairing_sigma[i] = j;
      s.pairing_sigma[j] = i;
    }
    s.pairing_theta.resize(config.M);
    for (double& t : s.pairing_theta) t = rng.uniform(0.0, kTwoPi);
    return s;
  }

  if (config.architecture == Architecture::DynamicGroupConnected) {
    s.cell_permutation.resize(config.cells());
    std::iota(s.cell_permutation.begin(), s.cell_permutation.end(), 0);
    for (int i = config.cells() - 1; i > 0; --i) {
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(s.cell_permutation[i], s.cell_permutation[j]);
    }
  }

  const int rows = config.group_antennas();
  const int cols = config.group_cells();
  s.blocks.reserve(config.num_groups());
  for (int g = 0; g < config.num_groups(); ++g) {
    CMatrix A(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int col = 0; col < cols; ++col) A(r, col) = rng.cgauss();
    // QR with phase correction makes the Q factor Haar-distributed.
    Eigen::HouseholderQR<CMatrix> qr(A);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(rows, cols);
    CMatrix R = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (int col = 0; col < cols; ++col) {
      std::complex<double> d = R(col, col);
      double mag = std::abs(d);
      Q.col(col) *= (mag > 0) ? d / mag : 1.0;
    }
    s.blocks.push_back(std::move(Q));
  }
  return s;
}

namespace {

ScatteringState project_impl(ScatteringState s,
                             const std::vector<CMatrix>& raw_blocks) {
  const RisConfig& c = s.config;
  if (c.architecture == Architecture::NonDiagonal) {
    if (!raw_blocks.empty())
      throw ShapeError("non-diagonal state has no raw blocks to project");
    return s;
  }
  if (raw_blocks.size() != static_cast<size_t>(c.num_groups()))
    throw ShapeError("raw block count mismatch");
  const int rows = c.group_antennas();
  const int cols = c.group_cells();
  s.blocks.clear();
  s.blocks.reserve(raw_blocks.size());
  for (const CMatrix& A : raw_blocks) {
    if (A.rows() != rows || A.cols() != cols)
      throw ShapeError("raw block shape mismatch");
    Eigen::JacobiSVD<CMatrix> svd(A,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-12 * std::max(1.0, sv(0)))
      throw RankDeficientError("raw block is rank deficient");
    s.blocks.push_back(svd.matrixU() * svd.matrixV().adjoint());
  }
  return s;
}

}  // namespace

ScatteringState project(const RisConfig& config,
                        const std::vector<CMatrix>& raw_blocks) {
  config.validate();
  ScatteringState s;
  s.config = config;
  if (config.architecture == Architecture::DynamicGroupConnected) {
    s.cell_permutation.resize(config.cells());
    std::iota(s.cell_permutation.begin(), s.cell_permutation.end(), 0);
  }
  if (config.architecture == Architecture::NonDiagonal)
    throw ShapeError(
        "projecting a non-diagonal state requires the pairing: use the "
        "overload taking an existing state");
  return project_impl(std::move(s), raw_blocks);
}

ScatteringState project(const ScatteringState& like,
                        const std::vector<CMatrix>& raw_blocks) {
  ScatteringState s;
  s.config = like.config;
  s.cell_permutation = like.cell_permutation;
  s.pairing_sigma = like.pairing_sigma;
  s.pairing_theta = like.pairing_theta;
  return project_impl(std::move(s), raw_blocks);
}

std::vector<CMatrix> effective_matrices(const ScatteringState& state) {
  check_shapes(state);
  const RisConfig& c = state.config;

  if (c.architecture == Architecture::NonDiagonal) {
    CMatrix phi = CMatrix::Zero(c.M, c.M);
    for (int i = 0; i < c.M; ++i)
      phi(state.pairing_sigma[i], i) =
          std::polar(1.0, state.pairing_theta[i]);
    return {phi};
  }

  const int Ms = c.sector_size();
  const int Kg = c.group_cells();
  std::vector<CMatrix> phi(c.sectors, CMatrix::Zero(Ms, Ms));
  for (int g = 0; g < c.num_groups(); ++g) {
    const CMatrix& V = state.blocks[g];
    for (int l = 0; l < c.sectors; ++l)
      for (int r = 0; r < Kg; ++r)
        for (int col = 0; col < Kg; ++col)
          phi[l](cell_of(state, g, r), cell_of(state, g, col)) =
              V(l * Kg + r, col);
  }
  return phi;
}

ScatteringState quantize_phases(const ScatteringState& state, int bits) {
  const RisConfig& c = state.config;
  const bool diagonal_reflective =
      c.mode == Mode::Reflective &&
      (c.architecture == Architecture::SingleConnected ||
       (c.architecture == Architecture::GroupConnected && c.group_size == 1));
  if (!diagonal_reflective)
    throw UnsupportedArchitectureError(
        "phase quantization is defined only for reflective single-connected");
  if (bits <= 0) throw ConfigError("bits must be positive");

  ScatteringState out = state;
  const double step = kTwoPi / std::ldexp(1.0, std::min(bits, 62));
  for (CMatrix& V : out.blocks) {
    double theta = std::arg(V(0, 0));
    V(0, 0) = std::polar(1.0, step * std::round(theta / step));
  }
  return out;
}

std::string dump(const ScatteringState& state) {
  std::vector<CMatrix> phis = effective_matrices(state);
  std::string out;
  char buf[96];
  for (size_t l = 0; l < phis.size(); ++l) {
    std::snprintf(buf, sizeof(buf), "# phi %zu (%ldx%ld)\n", l + 1,
                  static_cast<long>(phis[l].rows()),
                  static_cast<long>(phis[l].cols()));
    out += buf;
    for (Eigen::Index r = 0; r < phis[l].rows(); ++r) {
      for (Eigen::Index col = 0; col < phis[l].cols(); ++col) {
        const std::complex<double>& z = phis[l](r, col);
        std::snprintf(buf, sizeof(buf), "%.9g%+.9gj", z.real(), z.imag());
        out += buf;
        if (col + 1 < phis[l].cols()) out += ", ";
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace bdris
