// Measures the RIS gradient step at M = 64 across group sizes. The projection
// dominates: G groups of size M/G cost on the order of (M/G)^2 x G x M flops
// per step, so doubling G should roughly halve the time. `--scaling-check`
// asserts that trend with a 2x allowance instead of printing timings.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <vector>

#include <benchmark/benchmark.h>

#include "bdris/channel.hpp"
#include "bdris/harness.hpp"
#include "bdris/optimizer.hpp"

namespace {

constexpr int kM = 64;

struct Workload {
  bdris::RisConfig config;
  bdris::SceneConfig scene;
  bdris::ChannelRealization ch;
  bdris::ScatteringState state;
  bdris::Precoder W;
  bdris::OptimizerParams params;
};

Workload make_workload(int group_size) {
  Workload w;
  w.config = group_size == kM
                 ? bdris::reflective(kM, bdris::Architecture::FullyConnected)
                 : bdris::reflective(kM, bdris::Architecture::GroupConnected,
                                     group_size);
  bdris::Rng rng(12345);
  w.ch = bdris::realize(w.scene, w.config, rng);
  w.state = bdris::random_feasible(w.config, rng);
  // Matched-filter seed, same as solve(): WMMSE from an all-zero precoder
  // would stay at zero and the gradient step would exit immediately.
  bdris::CMatrix A = bdris::effective_channels(w.ch, w.state);
  w.W.W = bdris::CMatrix::Zero(A.rows(), A.cols());
  const double per_user = w.scene.tx_power / static_cast<double>(A.cols());
  for (Eigen::Index k = 0; k < A.cols(); ++k)
    w.W.W.col(k) = std::sqrt(per_user) * A.col(k) / A.col(k).norm();
  w.W = bdris::precoder_update(w.ch, w.state, w.W, w.scene.tx_power,
                               w.scene.noise_power);
  w.params.inner_steps = 2;
  return w;
}

void bm_ris_update(benchmark::State& state) {
  Workload w = make_workload(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    bdris::ScatteringState out =
        bdris::ris_update(w.ch, w.state, w.W, w.params);
    benchmark::DoNotOptimize(out.blocks.data());
  }
}

double median_seconds(const Workload& w, int reps) {
  std::vector<double> times;
  times.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    bdris::ScatteringState out =
        bdris::ris_update(w.ch, w.state, w.W, w.params);
    benchmark::DoNotOptimize(out.blocks.data());
    times.push_back(std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

int scaling_check() {
  const int reps = 9;
  Workload full = make_workload(kM);
  median_seconds(full, 3);  // warm up allocators and caches
  double t1 = median_seconds(full, reps);
  bool ok = true;
  for (int g : {2, 4}) {
    Workload w = make_workload(kM / g);
    double tg = median_seconds(w, reps);
    double bound = 2.0 * t1 / g;
    std::cout << "G=" << g << ": " << tg * 1e3 << " ms (bound "
              << bound * 1e3 << " ms, G=1 took " << t1 * 1e3 << " ms)\n";
    if (tg > bound) ok = false;
  }
  std::cout << (ok ? "scaling check passed" : "scaling check FAILED")
            << std::endl;
  return ok ? 0 : 1;
}

}  // namespace

BENCHMARK(bm_ris_update)->Arg(64)->Arg(32)->Arg(16)->Unit(
    benchmark::kMillisecond);

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--scaling-check") == 0) return scaling_check();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
