#include <cmath>
#include <complex>
#include <vector>

#include "bdris/channel.hpp"
#include "bdris/errors.hpp"
#include "bdris/optimizer.hpp"
#include "doctest.h"

using namespace bdris;

namespace {

ChannelRealization make_channel(const SceneConfig& scene, const RisConfig& c,
                                std::uint64_t seed) {
  Rng rng(seed);
  return realize(scene, c, rng);
}

double received_power(const ChannelRealization& ch,
                      const ScatteringState& state, const Precoder& W) {
  CMatrix A = effective_channels(ch, state);
  return std::norm((A.adjoint() * W.W)(0, 0));
}

SceneConfig los_scene() {
  SceneConfig s;
  s.K = 1;
  s.rician_factor = 1e14;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("optimizer");

TEST_CASE("sum rate is zero without signal") {
  SceneConfig scene;
  RisConfig c = reflective(4, Architecture::SingleConnected);
  ChannelRealization ch = make_channel(scene, c, 1);
  Rng rng(2);
  ScatteringState s = random_feasible(c, rng);
  Precoder W;
  W.W = CMatrix::Zero(scene.N, scene.K);
  CHECK(sum_rate(ch, s, W) == 0.0);
}

TEST_CASE("unit SNR gives exactly one bit") {
  ChannelRealization ch;
  ch.G_mat = CMatrix::Identity(1, 1);
  ch.h = {CVector::Ones(1)};
  ch.sector_of_user = {1};
  ch.noise_power = 1.0;
  ScatteringState s;
  s.config = reflective(1, Architecture::SingleConnected);
  s.blocks = {CMatrix::Identity(1, 1)};
  Precoder W;
  W.W = CMatrix::Ones(1, 1);  // |g|^2 = 1, P = 1, sigma^2 = 1
  CHECK(sum_rate(ch, s, W) == 1.0);
}

TEST_CASE("sum rate matches a term-by-term SINR evaluation") {
  SceneConfig scene;
  scene.N = 2;
  scene.K = 2;
  RisConfig c = reflective(2, Architecture::FullyConnected);
  ChannelRealization ch = make_channel(scene, c, 3);
  Rng rng(4);
  ScatteringState s = random_feasible(c, rng);
  Precoder W;
  W.W = CMatrix(2, 2);
  Rng wr(5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) W.W(i, j) = 0.5 * wr.cgauss();

  CMatrix phi = effective_matrices(s)[0];
  double expected = 0.0;
  for (int k = 0; k < 2; ++k) {
    CVector a = (ch.h[k].adjoint() * phi * ch.G_mat).adjoint();
    double sig = std::norm((a.adjoint() * W.W.col(k))(0, 0));
    double intf = ch.noise_power;
    for (int j = 0; j < 2; ++j)
      if (j != k) intf += std::norm((a.adjoint() * W.W.col(j))(0, 0));
    expected += std::log2(1.0 + sig / intf);
  }
  CHECK(sum_rate(ch, s, W) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sum rate refuses infeasible states") {
  SceneConfig scene;
  RisConfig c = reflective(4, Architecture::SingleConnected);
  ChannelRealization ch = make_channel(scene, c, 6);
  Rng rng(7);
  ScatteringState s = random_feasible(c, rng);
  s.blocks[0] *= 1.1;
  Precoder W;
  W.W = CMatrix::Zero(scene.N, scene.K);
  CHECK_THROWS_AS(sum_rate(ch, s, W), DomainError);
}

TEST_CASE("single-user precoder is the matched filter") {
  SceneConfig scene;
  scene.K = 1;
  RisConfig c = reflective(8, Architecture::FullyConnected);
  ChannelRealization ch = make_channel(scene, c, 8);
  Rng rng(9);
  ScatteringState s = random_feasible(c, rng);
  Precoder W0;
  W0.W = CMatrix::Zero(scene.N, 1);
  Precoder W = precoder_update(ch, s, W0, scene.tx_power, scene.noise_power);
  CVector a = effective_channels(ch, s).col(0);
  CVector expected = std::sqrt(scene.tx_power) * a / a.norm();
  CHECK((W.W.col(0) - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("orthogonal users get interference-free scaled matched filters") {
  ChannelRealization ch;
  ch.G_mat = CMatrix::Identity(4, 4);
  ch.h.assign(4, CVector::Zero(4));
  for (int k = 0; k < 4; ++k) ch.h[k](k) = 1.0;
  ch.sector_of_user = {1, 1, 1, 1};
  ch.noise_power = 1e-3;

  ScatteringState s;
  s.config = reflective(4, Architecture::FullyConnected);
  s.blocks = {CMatrix::Identity(4, 4)};

  const double P = 1.0;
  Precoder W0;
  W0.W = 0.5 * CMatrix::Identity(4, 4);  // equal split matched start
  Precoder W = precoder_update(ch, s, W0, P, ch.noise_power);

  CMatrix S = effective_channels(ch, s).adjoint() * W.W;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      if (j != k) CHECK(std::abs(S(k, j)) <= 1e-9);
  CHECK(W.W.squaredNorm() == doctest::Approx(P).epsilon(1e-8));
}

TEST_CASE("generic instance activates the power constraint and never loses rate") {
  SceneConfig scene;
  RisConfig c = reflective(8, Architecture::GroupConnected, 4);
  ChannelRealization ch = make_channel(scene, c, 10);
  Rng rng(11);
  ScatteringState s = random_feasible(c, rng);
  CMatrix A = effective_channels(ch, s);
  Precoder W0;
  W0.W = CMatrix::Zero(scene.N, scene.K);
  for (int k = 0; k < scene.K; ++k)
    W0.W.col(k) = std::sqrt(scene.tx_power / scene.K) * A.col(k).normalized();
  double r0 = sum_rate(ch, s, W0);

  Precoder W = precoder_update(ch, s, W0, scene.tx_power, scene.noise_power);
  CHECK(W.W.squaredNorm() == doctest::Approx(scene.tx_power).epsilon(1e-8));
  CHECK(sum_rate(ch, s, W) >= r0 - 1e-9);
}

TEST_CASE("ris update leaves a stationary point untouched") {
  SceneConfig scene;
  RisConfig c = reflective(8, Architecture::GroupConnected, 2);
  ChannelRealization ch = make_channel(scene, c, 12);
  Rng rng(13);
  ScatteringState s = random_feasible(c, rng);
  Precoder W;
  W.W = CMatrix::Zero(scene.N, scene.K);
  ScatteringState out = ris_update(ch, s, W, OptimizerParams{});
  for (size_t g = 0; g < s.blocks.size(); ++g)
    CHECK(out.blocks[g] == s.blocks[g]);
}

TEST_CASE("ris update improves the rate and stays feasible") {
  SceneConfig scene;
  for (const RisConfig& c :
       {reflective(8, Architecture::SingleConnected),
        reflective(8, Architecture::FullyConnected),
        hybrid(8, Architecture::GroupConnected, 4)}) {
    ChannelRealization ch = make_channel(scene, c, 14);
    Rng rng(15);
    ScatteringState s = random_feasible(c, rng);
    CMatrix A = effective_channels(ch, s);
    Precoder W;
    W.W = CMatrix::Zero(scene.N, scene.K);
    for (int k = 0; k < scene.K; ++k)
      W.W.col(k) =
          std::sqrt(scene.tx_power / scene.K) * A.col(k).normalized();
    double before = sum_rate(ch, s, W);
    ScatteringState out = ris_update(ch, s, W, OptimizerParams{});
    CHECK(sum_rate(ch, out, W) >= before);
    CHECK(validate(out, 1e-9).pass);
  }
}

TEST_CASE("solve approaches the closed-form alignment rate on LoS") {
  SceneConfig scene = los_scene();
  RisConfig c = reflective(8, Architecture::SingleConnected);
  ChannelRealization ch = make_channel(scene, c, 16);
  Rng rng(17);
  SolveResult res = solve(ch, c, scene, OptimizerParams{}, rng);
  double p = received_power(ch, res.final_state, res.final_precoder);
  double oracle = oracle_power_single_los(ch, scene.tx_power);
  CHECK(p == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("solve approaches the matched-rotation power when fully connected") {
  SceneConfig scene = los_scene();
  scene.rician_factor = 1.0;  // oracle holds for any channel rank
  RisConfig c = reflective(8, Architecture::FullyConnected);
  ChannelRealization ch = make_channel(scene, c, 18);
  Rng rng(19);
  SolveResult res = solve(ch, c, scene, OptimizerParams{}, rng);
  double p = received_power(ch, res.final_state, res.final_precoder);
  double oracle = oracle_power_fully(ch, scene.tx_power);
  CHECK(p == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("trajectories never decrease and reruns are bit identical") {
  SceneConfig scene;
  std::vector<RisConfig> combos = {
      reflective(8, Architecture::SingleConnected),
      reflective(8, Architecture::GroupConnected, 2),
      reflective(8, Architecture::FullyConnected),
      reflective(8, Architecture::DynamicGroupConnected, 4),
      hybrid(8, Architecture::SingleConnected),
      hybrid(8, Architecture::FullyConnected),
      multi_sector(8, 4, Architecture::SingleConnected),
      multi_sector(8, 4, Architecture::GroupConnected, 8),
  };
  for (const RisConfig& c : combos) {
    ChannelRealization ch = make_channel(scene, c, 20);
    for (std::uint64_t seed : {21, 22, 23}) {
      Rng r1(seed), r2(seed);
      SolveResult a = solve(ch, c, scene, OptimizerParams{}, r1);
      SolveResult b = solve(ch, c, scene, OptimizerParams{}, r2);
      REQUIRE(a.rate_trajectory == b.rate_trajectory);
      for (size_t i = 1; i < a.rate_trajectory.size(); ++i)
        CHECK(a.rate_trajectory[i] >= a.rate_trajectory[i - 1] - 1e-6);
      CHECK(a.iterations_used ==
            static_cast<int>(a.rate_trajectory.size()));
      CHECK(a.final_precoder.W.squaredNorm() <= scene.tx_power + 1e-9);
      CHECK(validate(a.final_state, 1e-9).pass);
    }
  }
}

TEST_CASE("solve handles the non-diagonal single-user chain") {
  SceneConfig scene;
  scene.K = 1;
  RisConfig c = reflective(8, Architecture::NonDiagonal);
  ChannelRealization ch = make_channel(scene, c, 24);
  Rng rng(25);
  SolveResult res = solve(ch, c, scene, OptimizerParams{}, rng);
  CHECK(validate(res.final_state, 1e-9).pass);
  for (size_t i = 1; i < res.rate_trajectory.size(); ++i)
    CHECK(res.rate_trajectory[i] >= res.rate_trajectory[i - 1] - 1e-6);

  // Multi-user non-diagonal optimization is out of scope.
  SceneConfig multi;
  ChannelRealization chm = make_channel(multi, c, 26);
  Rng rng2(27);
  CHECK_THROWS_AS(solve(chm, c, multi, OptimizerParams{}, rng2),
                  UnsupportedArchitectureError);
}

TEST_CASE("scaling both hops by c and noise by c^4 changes nothing") {
  SceneConfig scene;
  RisConfig c = reflective(8, Architecture::GroupConnected, 2);
  ChannelRealization ch = make_channel(scene, c, 28);

  // The cascade h^H Phi G picks up c from each hop, so received powers grow
  // by c^4 and the noise must follow to keep every SINR fixed.
  const double scale = 2.0;
  const double p4 = scale * scale * scale * scale;
  ChannelRealization ch2 = ch;
  ch2.G_mat *= scale;
  for (CVector& h : ch2.h) h *= scale;
  ch2.noise_power *= p4;
  SceneConfig scene2 = scene;
  scene2.noise_power *= p4;

  Rng r1(29), r2(29);
  SolveResult a = solve(ch, c, scene, OptimizerParams{}, r1);
  SolveResult b = solve(ch2, c, scene2, OptimizerParams{}, r2);
  REQUIRE(a.rate_trajectory.size() == b.rate_trajectory.size());
  for (size_t i = 0; i < a.rate_trajectory.size(); ++i)
    CHECK(a.rate_trajectory[i] ==
          doctest::Approx(b.rate_trajectory[i]).epsilon(1e-6));
}

TEST_CASE("transfer into a richer architecture preserves the rate exactly") {
  SceneConfig scene;
  RisConfig single = reflective(8, Architecture::SingleConnected);
  ChannelRealization ch = make_channel(scene, single, 30);
  Rng rng(31);
  SolveResult res = solve(ch, single, scene, OptimizerParams{}, rng);
  double r0 = sum_rate(ch, res.final_state, res.final_precoder);

  for (const RisConfig& richer :
       {reflective(8, Architecture::GroupConnected, 2),
        reflective(8, Architecture::GroupConnected, 4),
        reflective(8, Architecture::FullyConnected)}) {
    ScatteringState t = transfer_state(res.final_state, richer);
    CHECK(validate(t, 1e-9).pass);
    CHECK(sum_rate(ch, t, res.final_precoder) ==
          doctest::Approx(r0).epsilon(1e-12));
  }
}

TEST_CASE("warm started richer runs finish at least as high") {
  SceneConfig scene;
  RisConfig single = reflective(8, Architecture::SingleConnected);
  RisConfig fully = reflective(8, Architecture::FullyConnected);
  ChannelRealization ch = make_channel(scene, single, 32);
  Rng rng(33);
  SolveResult poor = solve(ch, single, scene, OptimizerParams{}, rng);
  SolveResult rich =
      solve_warm(ch, fully, scene, OptimizerParams{},
                 transfer_state(poor.final_state, fully), poor.final_precoder);
  CHECK(rich.rate_trajectory.back() >=
        poor.rate_trajectory.back() - 1e-9);
}

TEST_CASE("transfer guards") {
  Rng rng(34);
  ScatteringState s =
      random_feasible(reflective(8, Architecture::SingleConnected), rng);
  CHECK_THROWS_AS(
      transfer_state(s, reflective(16, Architecture::FullyConnected)),
      ShapeError);
  CHECK_THROWS_AS(transfer_state(s, hybrid(8, Architecture::FullyConnected)),
                  ShapeError);
  CHECK_THROWS_AS(transfer_state(s, reflective(8, Architecture::NonDiagonal)),
                  ShapeError);
}

TEST_CASE("oracles reject what they cannot certify") {
  SceneConfig scene;  // K = 4
  RisConfig c = reflective(8, Architecture::SingleConnected);
  ChannelRealization ch = make_channel(scene, c, 35);
  CHECK_THROWS_AS(oracle_power_fully(ch, 1.0), DomainError);

  SceneConfig one = los_scene();
  one.rician_factor = 1.0;  // full-rank channel
  ChannelRealization ch1 = make_channel(one, c, 36);
  CHECK_THROWS_AS(oracle_power_single_los(ch1, 1.0), DomainError);
}

TEST_CASE("optimizer params validate") {
  OptimizerParams p;
  p.shrink = 1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = OptimizerParams{};
  p.max_outer_iterations = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_SUITE_END();
