#include "bdris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numeric>

#include "bdris/errors.hpp"

namespace bdris {

namespace {

using Complex = std::complex<double>;

int cell_in_slot(const ScatteringState& s, int group, int slot) {
  const int Kg = s.config.group_cells();
  return s.cell_permutation.empty() ? group * Kg + slot
                                    : s.cell_permutation[group * Kg + slot];
}

void check_dims(const ChannelRealization& ch, const RisConfig& config) {
  const int Ms = config.sector_size();
  if (ch.G_mat.rows() != Ms) throw ShapeError("G_mat rows must equal M/L");
  if (ch.h.size() != ch.sector_of_user.size())
    throw ShapeError("per-user channel list inconsistent");
  for (size_t k = 0; k < ch.h.size(); ++k) {
    if (ch.h[k].size() != Ms) throw ShapeError("h_k must have M/L entries");
    int l = ch.sector_of_user[k];
    if (l < 1 || l > config.sectors)
      throw ShapeError("user assigned to a nonexistent sector");
  }
}

double rate_from_links(const CMatrix& S, double noise_power) {
  // S(k, j) = a_k^H w_j
  double rate = 0.0;
  for (Eigen::Index k = 0; k < S.rows(); ++k) {
    double interference = noise_power;
    for (Eigen::Index j = 0; j < S.cols(); ++j)
      if (j != k) interference += std::norm(S(k, j));
    rate += std::log2(1.0 + std::norm(S(k, k)) / interference);
  }
  return rate;
}

CMatrix links(const CMatrix& A, const CMatrix& W) {
  if (A.rows() != W.rows() || A.cols() != W.cols())
    throw ShapeError("precoder shape mismatch");
  return A.adjoint() * W;
}

}  // namespace

void OptimizerParams::validate() const {
  if (max_outer_iterations <= 0 || inner_steps <= 0)
    throw ConfigError("iteration counts must be positive");
  if (rel_tolerance <= 0 || initial_step <= 0 || sufficient_increase <= 0)
    throw ConfigError("tolerances and steps must be positive");
  if (shrink <= 0 || shrink >= 1)
    throw ConfigError("shrink factor must lie in (0, 1)");
}

CMatrix effective_channels(const ChannelRealization& ch,
                           const ScatteringState& state) {
  check_dims(ch, state.config);
  std::vector<CMatrix> phis = effective_matrices(state);
  const int K = static_cast<int>(ch.h.size());
  CMatrix A(ch.G_mat.cols(), K);
  for (int k = 0; k < K; ++k) {
    const CMatrix& phi = phis[ch.sector_of_user[k] - 1];
    A.col(k) = ch.G_mat.adjoint() * (phi.adjoint() * ch.h[k]);
  }
  return A;
}

double sum_rate(const ChannelRealization& ch, const ScatteringState& state,
                const Precoder& W) {
  ValidationReport rep = validate(state, 1e-6);
  if (!rep.pass)
    throw DomainError("scattering state infeasible (deviation " +
                      std::to_string(rep.max_deviation) + ")");
  return rate_from_links(links(effective_channels(ch, state), W.W),
                         ch.noise_power);
}

Precoder precoder_update(const ChannelRealization& ch,
                         const ScatteringState& state, const Precoder& W,
                         double tx_power, double noise_power) {
  if (tx_power < 0 || noise_power <= 0)
    throw ConfigError("tx_power must be nonnegative, noise_power positive");
  CMatrix A = effective_channels(ch, state);
  const int N = static_cast<int>(A.rows());
  const int K = static_cast<int>(A.cols());

  if (K == 1) {
    CVector a = A.col(0);
    double n = a.norm();
    Precoder out;
    out.W = CMatrix::Zero(N, 1);
    if (n > 0) out.W.col(0) = std::sqrt(tx_power) * a / n;
    return out;
  }

  CMatrix S = links(A, W.W);
  CMatrix B = CMatrix::Zero(N, N);
  CMatrix R = CMatrix::Zero(N, K);
  for (int k = 0; k < K; ++k) {
    double T = S.row(k).squaredNorm() + noise_power;
    Complex skk = S(k, k);
    Complex u = skk / T;
    double mse = 1.0 - std::norm(skk) / T;
    double weight = 1.0 / mse;
    B += weight * std::norm(u) * (A.col(k) * A.col(k).adjoint());
    R.col(k) = weight * u * A.col(k);
  }

  auto solve_for = [&](double mu) {
    CMatrix M = B + mu * CMatrix::Identity(N, N);
    return CMatrix(M.ldlt().solve(R));
  };

  // Minimum-norm solution handles the rank-deficient mu = 0 case (K < N).
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(B);
  CMatrix cand = cod.solve(R);
  if (cand.squaredNorm() > tx_power) {
    double hi = 1.0;
    int doublings = 0;
    while (solve_for(hi).squaredNorm() > tx_power) {
      hi *= 2.0;
      if (++doublings > 200)
        throw SolverError("power bisection could not bracket the dual");
    }
    double lo = 0.0;
    while (hi - lo > 1e-10 * hi) {
      double mid = 0.5 * (lo + hi);
      if (solve_for(mid).squaredNorm() > tx_power)
        lo = mid;
      else
        hi = mid;
    }
    cand = solve_for(hi);
  }

  double r_new = rate_from_links(links(A, cand), noise_power);
  double r_old = rate_from_links(S, noise_power);
  if (r_new < r_old) return W;
  Precoder out;
  out.W = std::move(cand);
  return out;
}

namespace {

// Wirtinger gradient of the sum-rate with respect to each effective matrix.
std::vector<CMatrix> phi_gradients(const ChannelRealization& ch,
                                   const ScatteringState& state,
                                   const CMatrix& W) {
  const RisConfig& c = state.config;
  const int Ms = c.sector_size();
  const int K = static_cast<int>(ch.h.size());
  CMatrix A = effective_channels(ch, state);
  CMatrix S = links(A, W);
  CMatrix U = ch.G_mat * W;  // column j is G w_j

  std::vector<CMatrix> D(c.sectors, CMatrix::Zero(Ms, Ms));
  for (int k = 0; k < K; ++k) {
    double T = S.row(k).squaredNorm() + ch.noise_power;
    double I = T - std::norm(S(k, k));
    CVector b = CVector::Zero(Ms);
    for (int j = 0; j < K; ++j) {
      double coef = (1.0 / T - (j == k ? 0.0 : 1.0 / I)) / M_LN2;
      b += std::conj(coef * S(k, j)) * U.col(j);
    }
    D[ch.sector_of_user[k] - 1] += ch.h[k] * b.adjoint();
  }
  return D;
}

std::vector<CMatrix> gather_blocks(const ScatteringState& like,
                                   const std::vector<CMatrix>& phis) {
  const RisConfig& c = like.config;
  const int Kg = c.group_cells();
  std::vector<CMatrix> out;
  out.reserve(c.num_groups());
  for (int g = 0; g < c.num_groups(); ++g) {
    CMatrix block(c.sectors * Kg, Kg);
    for (int l = 0; l < c.sectors; ++l)
      for (int r = 0; r < Kg; ++r)
        for (int col = 0; col < Kg; ++col)
          block(l * Kg + r, col) =
              phis[l](cell_in_slot(like, g, r), cell_in_slot(like, g, col));
    out.push_back(std::move(block));
  }
  return out;
}

ScatteringState cophase_pairing(const ChannelRealization& ch,
                                const ScatteringState& state,
                                const CMatrix& W) {
  ScatteringState cand = state;
  CVector g_eff = ch.G_mat * W.col(0);
  const CVector& h = ch.h[0];
  for (int i = 0; i < state.config.M; ++i)
    cand.pairing_theta[i] =
        std::arg(h(state.pairing_sigma[i])) - std::arg(g_eff(i));
  return cand;
}

}  // namespace

ScatteringState ris_update(const ChannelRealization& ch,
                           const ScatteringState& state, const Precoder& W,
                           const OptimizerParams& params) {
  params.validate();
  const RisConfig& c = state.config;

  if (c.architecture == Architecture::NonDiagonal) {
    if (ch.h.size() != 1)
      throw UnsupportedArchitectureError(
          "non-diagonal optimization supports a single user only");
    double r_old = sum_rate(ch, state, W);
    ScatteringState cand = cophase_pairing(ch, state, W.W);
    return sum_rate(ch, cand, W) >= r_old ? cand : state;
  }

  ScatteringState cur = state;
  double r_cur = sum_rate(ch, cur, W);
  for (int step_idx = 0; step_idx < params.inner_steps; ++step_idx) {
    std::vector<CMatrix> D = phi_gradients(ch, cur, W.W);
    std::vector<CMatrix> block_grad = gather_blocks(cur, D);
    // Project onto the tangent space at V (V^H dV skew): the radial part is
    // annihilated by the retraction anyway, and leaving it in df0 makes the
    // line search reject every step once the tangential fraction drops below
    // sqrt(sufficient_increase).
    for (size_t g = 0; g < block_grad.size(); ++g) {
      const CMatrix& V = cur.blocks[g];
      CMatrix VtD = V.adjoint() * block_grad[g];
      block_grad[g] -= V * (0.5 * (VtD + VtD.adjoint()));
    }
    double gnorm_sq = 0.0;
    for (const CMatrix& dg : block_grad) gnorm_sq += dg.squaredNorm();
    double gnorm = std::sqrt(gnorm_sq);
    if (gnorm <= 1e-14 * std::max(1.0, std::abs(r_cur))) break;
    // Ascent along the normalized tangent gradient; df0 is its directional
    // derivative.
    double df0 = 2.0 * gnorm;

    bool accepted = false;
    double step = params.initial_step;
    for (int bt = 0; bt < 60 && step > 1e-14; ++bt, step *= params.shrink) {
      std::vector<CMatrix> raw = cur.blocks;
      for (size_t g = 0; g < raw.size(); ++g)
        raw[g] += (step / gnorm) * block_grad[g];
      ScatteringState cand;
      try {
        cand = project(cur, raw);
      } catch (const RankDeficientError&) {
        continue;
      }
      double r_new = sum_rate(ch, cand, W);
      if (r_new >= r_cur + params.sufficient_increase * step * df0) {
        cur = std::move(cand);
        r_cur = r_new;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return cur;
}

std::vector<int> select_grouping(const ChannelRealization& ch,
                                 const RisConfig& config, const Precoder& W,
                                 bool exhaustive) {
  config.validate();
  if (config.architecture != Architecture::DynamicGroupConnected)
    throw UnsupportedArchitectureError(
        "grouping selection applies to dynamic grouping only");
  check_dims(ch, config);
  const int cells = config.cells();
  const int Kg = config.group_cells();
  const int G = config.num_groups();

  // Two magnitude features per cell: incident energy and departing energy.
  // Without a precoder the raw row norms of G overrate cells no single beam
  // can serve at once; project onto the dominant transmit direction instead.
  std::vector<double> f1(cells), f2(cells);
  bool have_w = W.W.size() > 0 && W.W.norm() > 0;
  CMatrix incident;
  if (have_w) {
    incident = ch.G_mat * W.W;
  } else {
    Eigen::JacobiSVD<CMatrix> svd(ch.G_mat, Eigen::ComputeThinV);
    incident = ch.G_mat * svd.matrixV().col(0);
  }
  for (int c = 0; c < cells; ++c) {
    f1[c] = incident.row(c).norm();
    double acc = 0.0;
    for (const CVector& hk : ch.h) acc += std::norm(hk(c));
    f2[c] = std::sqrt(acc);
  }

  auto surrogate = [&](const std::vector<int>& perm) {
    double total = 0.0;
    for (int g = 0; g < G; ++g) {
      double e1 = 0.0, e2 = 0.0;
      for (int r = 0; r < Kg; ++r) {
        int c = perm[g * Kg + r];
        e1 += f1[c] * f1[c];
        e2 += f2[c] * f2[c];
      }
      total += std::sqrt(e1 * e2);
    }
    return total;
  };

  if (exhaustive) {
    if (cells > 8)
      throw ConfigError("exhaustive grouping is limited to 8 cells");
    std::vector<std::vector<int>> parts = equal_partitions(cells, Kg);
    const std::vector<int>* best = &parts.front();
    double best_score = surrogate(parts.front());
    for (const auto& p : parts) {
      double s = surrogate(p);
      if (s > best_score) {
        best_score = s;
        best = &p;
      }
    }
    return *best;
  }

  // Greedy: seed each group with the strongest free cell, then add the cells
  // whose feature direction is most complementary to the group so far.
  std::vector<char> used(cells, 0);
  std::vector<int> perm;
  perm.reserve(cells);
  for (int g = 0; g < G; ++g) {
    int seed = -1;
    double seed_energy = -1.0;
    for (int c = 0; c < cells; ++c) {
      if (used[c]) continue;
      double e = f1[c] * f1[c] + f2[c] * f2[c];
      if (e > seed_energy) {
        seed_energy = e;
        seed = c;
      }
    }
    std::vector<int> group = {seed};
    used[seed] = 1;
    double s1 = f1[seed], s2 = f2[seed];
    for (int slot = 1; slot < Kg; ++slot) {
      int best = -1;
      double best_cos = std::numeric_limits<double>::infinity();
      for (int c = 0; c < cells; ++c) {
        if (used[c]) continue;
        double denom =
            std::hypot(f1[c], f2[c]) * std::hypot(s1, s2);
        double cosine = denom > 0 ? (f1[c] * s1 + f2[c] * s2) / denom : 0.0;
        if (cosine < best_cos) {
          best_cos = cosine;
          best = c;
        }
      }
      group.push_back(best);
      used[best] = 1;
      s1 += f1[best];
      s2 += f2[best];
    }
    std::sort(group.begin(), group.end());
    perm.insert(perm.end(), group.begin(), group.end());
  }

  // The one-shot assignment can trap the complementarity rule; polish with
  // best-improvement transpositions on the surrogate until a local maximum.
  // Strict improvement only, so tied instances keep the construction order.
  bool improved = true;
  while (improved) {
    improved = false;
    double cur = surrogate(perm);
    double best_s = cur + 1e-12 * (1.0 + std::abs(cur));
    int bi = -1, bj = -1;
    for (int i = 0; i < cells; ++i)
      for (int j = i + 1; j < cells; ++j) {
        if (i / Kg == j / Kg) continue;
        std::swap(perm[i], perm[j]);
        double s = surrogate(perm);
        std::swap(perm[i], perm[j]);
        if (s > best_s) {
          best_s = s;
          bi = i;
          bj = j;
        }
      }
    if (bi >= 0) {
      std::swap(perm[bi], perm[bj]);
      improved = true;
    }
  }
  for (int g = 0; g < G; ++g)
    std::sort(perm.begin() + g * Kg, perm.begin() + (g + 1) * Kg);
  return perm;
}

namespace {

void partitions_rec(std::vector<int>& free_cells, std::vector<int>& acc,
                    int group_cells,
                    std::vector<std::vector<int>>& out) {
  if (free_cells.empty()) {
    out.push_back(acc);
    return;
  }
  int leader = free_cells.front();
  std::vector<int> rest(free_cells.begin() + 1, free_cells.end());
  int need = group_cells - 1;
  std::vector<int> pick(need);
  // Choose the leader's partners in ascending combinations.
  std::function<void(int, int)> choose = [&](int start, int depth) {
    if (depth == need) {
      acc.push_back(leader);
      for (int v : pick) acc.push_back(v);
      std::vector<int> remaining;
      for (int v : rest)
        if (std::find(pick.begin(), pick.end(), v) == pick.end())
          remaining.push_back(v);
      partitions_rec(remaining, acc, group_cells, out);
      acc.resize(acc.size() - group_cells);
      return;
    }
    for (int i = start; i < static_cast<int>(rest.size()); ++i) {
      pick[depth] = rest[i];
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);
}

}  // namespace

std::vector<std::vector<int>> equal_partitions(int cells, int group_cells) {
  if (cells <= 0 || group_cells <= 0 || cells % group_cells != 0)
    throw ConfigError("cells must split into equal groups");
  std::vector<int> free_cells(cells);
  std::iota(free_cells.begin(), free_cells.end(), 0);
  std::vector<int> acc;
  std::vector<std::vector<int>> out;
  partitions_rec(free_cells, acc, group_cells, out);
  return out;
}

namespace {

std::vector<int> matching_dp(const std::vector<std::vector<double>>& w,
                             int M) {
  const std::uint32_t full = (1u << M) - 1u;
  std::vector<double> dp(full + 1u, 0.0);
  for (std::uint32_t mask = 3; mask <= full; ++mask) {
    int bits = __builtin_popcount(mask);
    if (bits % 2) continue;
    int i = __builtin_ctz(mask);
    double best = -1.0;
    for (int j = i + 1; j < M; ++j) {
      if (!(mask >> j & 1u)) continue;
      double v = w[i][j] + dp[mask & ~(1u << i) & ~(1u << j)];
      if (v > best) best = v;
    }
    dp[mask] = best;
  }

  std::vector<int> sigma(M, -1);
  std::uint32_t mask = full;
  while (mask) {
    int i = __builtin_ctz(mask);
    double target = dp[mask];
    double tol = 1e-12 * (1.0 + std::abs(target));
    for (int j = i + 1; j < M; ++j) {
      if (!(mask >> j & 1u)) continue;
      std::uint32_t next = mask & ~(1u << i) & ~(1u << j);
      if (std::abs(w[i][j] + dp[next] - target) <= tol) {
        sigma[i] = j;
        sigma[j] = i;
        mask = next;
        break;
      }
    }
  }
  return sigma;
}

std::vector<int> matching_local(const std::vector<std::vector<double>>& w,
                                int M) {
  std::vector<int> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> sigma(M, -1);
  std::vector<char> used(M, 0);
  for (int i = 0; i < M; ++i) {
    if (used[i]) continue;
    int best = -1;
    for (int j = i + 1; j < M; ++j)
      if (!used[j] && (best < 0 || w[i][j] > w[i][best])) best = j;
    sigma[i] = best;
    sigma[best] = i;
    used[i] = used[best] = 1;
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 0; a < M; ++a) {
      if (sigma[a] < a) continue;
      for (int c = a + 1; c < M; ++c) {
        // Re-read both partners: an accepted swap earlier in this scan may
        // have re-paired a.
        int b = sigma[a];
        if (c == b) continue;
        int d = sigma[c];
        if (d < c) continue;
        double cur = w[a][b] + w[c][d];
        if (w[a][c] + w[b][d] > cur + 1e-12) {
          sigma[a] = c; sigma[c] = a; sigma[b] = d; sigma[d] = b;
          improved = true;
        } else if (w[a][d] + w[b][c] > cur + 1e-12) {
          sigma[a] = d; sigma[d] = a; sigma[b] = c; sigma[c] = b;
          improved = true;
        }
      }
    }
  }
  return sigma;
}

}  // namespace

Pairing pair_antennas(const ChannelRealization& ch, const RisConfig& config) {
  config.validate();
  if (config.architecture != Architecture::NonDiagonal)
    throw UnsupportedArchitectureError("pairing applies to non-diagonal only");
  if (ch.h.size() != 1)
    throw UnsupportedArchitectureError(
        "antenna pairing is defined for a single user");
  check_dims(ch, config);
  const int M = config.M;

  CVector g_eff;
  if (ch.G_mat.cols() == 1) {
    g_eff = ch.G_mat.col(0);
  } else {
    Eigen::JacobiSVD<CMatrix> svd(ch.G_mat, Eigen::ComputeThinU);
    g_eff = svd.singularValues()(0) * svd.matrixU().col(0);
  }
  const CVector& h = ch.h[0];

  std::vector<std::vector<double>> w(M, std::vector<double>(M, 0.0));
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j)
      w[i][j] = w[j][i] =
          std::abs(g_eff(i)) * std::abs(h(j)) +
          std::abs(g_eff(j)) * std::abs(h(i));

  Pairing p;
  p.sigma = M <= 20 ? matching_dp(w, M) : matching_local(w, M);
  p.theta.resize(M);
  for (int i = 0; i < M; ++i)
    p.theta[i] = std::arg(h(p.sigma[i])) - std::arg(g_eff(i));
  return p;
}

namespace {

Precoder matched_filter(const CMatrix& A, double tx_power) {
  Precoder W;
  W.W = CMatrix::Zero(A.rows(), A.cols());
  const double per_user = tx_power / static_cast<double>(A.cols());
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    double n = A.col(k).norm();
    if (n > 0) W.W.col(k) = std::sqrt(per_user) * A.col(k) / n;
  }
  return W;
}

SolveResult run_loop(const ChannelRealization& ch, const SceneConfig& scene,
                     const OptimizerParams& params, ScatteringState state,
                     Precoder W) {
  SolveResult res;
  double r_prev = sum_rate(ch, state, W);
  for (int it = 1; it <= params.max_outer_iterations; ++it) {
    W = precoder_update(ch, state, W, scene.tx_power, scene.noise_power);
    state = ris_update(ch, state, W, params);
    double r = sum_rate(ch, state, W);
    res.rate_trajectory.push_back(r);
    res.iterations_used = it;
    if (r - r_prev < params.rel_tolerance * std::max(r_prev, 1e-12)) {
      r_prev = r;
      break;
    }
    r_prev = r;
  }
  res.final_state = std::move(state);
  res.final_precoder = std::move(W);
  return res;
}

}  // namespace

SolveResult solve(const ChannelRealization& ch, const RisConfig& config,
                  const SceneConfig& scene, const OptimizerParams& params,
                  Rng& rng) {
  params.validate();
  scene.validate();
  check_dims(ch, config);
  if (static_cast<int>(ch.h.size()) != scene.K)
    throw ShapeError("scene K does not match the realization");

  ScatteringState state = random_feasible(config, rng);
  if (config.architecture == Architecture::NonDiagonal && scene.K == 1) {
    Pairing p = pair_antennas(ch, config);
    state.pairing_sigma = std::move(p.sigma);
    state.pairing_theta = std::move(p.theta);
  }
  Precoder W = matched_filter(effective_channels(ch, state), scene.tx_power);
  if (config.architecture == Architecture::DynamicGroupConnected) {
    state.cell_permutation = select_grouping(ch, config, W);
    W = matched_filter(effective_channels(ch, state), scene.tx_power);
  }
  return run_loop(ch, scene, params, std::move(state), std::move(W));
}

SolveResult solve_warm(const ChannelRealization& ch, const RisConfig& config,
                       const SceneConfig& scene, const OptimizerParams& params,
                       ScatteringState init_state, Precoder init_precoder) {
  params.validate();
  scene.validate();
  check_dims(ch, config);
  if (!(init_state.config == config))
    throw ConfigError("warm-start state built for a different configuration");
  return run_loop(ch, scene, params, std::move(init_state),
                  std::move(init_precoder));
}

ScatteringState transfer_state(const ScatteringState& source,
                               const RisConfig& target) {
  target.validate();
  const RisConfig& src = source.config;
  if (src.M != target.M || src.sectors != target.sectors)
    throw ShapeError("transfer requires matching (M, L)");
  if (src.architecture == Architecture::NonDiagonal ||
      target.architecture == Architecture::NonDiagonal)
    throw ShapeError("transfer is defined between block architectures");

  ScatteringState skeleton;
  skeleton.config = target;
  if (target.architecture == Architecture::DynamicGroupConnected) {
    skeleton.cell_permutation.resize(target.cells());
    std::iota(skeleton.cell_permutation.begin(),
              skeleton.cell_permutation.end(), 0);
  }
  std::vector<CMatrix> phis = effective_matrices(source);
  return project(skeleton, gather_blocks(skeleton, phis));
}

double oracle_power_fully(const ChannelRealization& ch, double tx_power) {
  if (ch.h.size() != 1) throw DomainError("oracle defined for a single user");
  Eigen::JacobiSVD<CMatrix> svd(ch.G_mat);
  double s1 = svd.singularValues()(0);
  return tx_power * ch.h[0].squaredNorm() * s1 * s1;
}

double oracle_power_single_los(const ChannelRealization& ch,
                               double tx_power) {
  if (ch.h.size() != 1) throw DomainError("oracle defined for a single user");
  Eigen::JacobiSVD<CMatrix> svd(ch.G_mat, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv(1) > 1e-6 * sv(0))
    throw DomainError("alignment oracle requires a rank-one channel");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ch.h[0].size(); ++i)
    acc += std::abs(ch.h[0](i)) * std::abs(svd.matrixU()(i, 0));
  return tx_power * sv(0) * sv(0) * acc * acc;
}

}  // namespace bdris
