#include "bdris/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "bdris/errors.hpp"
#include "json.hpp"

namespace bdris {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string("unknown key \"") + it.key() + "\" in " +
                        where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for \"") + key + "\": " +
                      e.what());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RisConfig SweepEntry::config_for(int m) const {
  RisConfig c;
  c.M = m;
  c.mode = mode;
  c.sectors = sectors;
  if (c.sectors == 0)
    c.sectors = mode == Mode::Reflective ? 1 : (mode == Mode::Hybrid ? 2 : 0);
  c.architecture = architecture;
  c.group_size = group_size;
  c.validate();
  return c;
}

void ExperimentSpec::validate() const {
  scene.validate();
  params.validate();
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (sweeps.empty()) throw ConfigError("at least one sweep is required");
  for (const RisConfig& c : expand()) {
    if (scene.K % c.sectors != 0)
      throw ConfigError("K must be divisible by the sector count of " +
                        to_string(c.mode));
    if (metric == Metric::PowerOracle &&
        c.architecture != Architecture::SingleConnected &&
        c.architecture != Architecture::FullyConnected)
      throw ConfigError(
          "power_oracle metric covers single and fully connected only");
  }
}

std::vector<RisConfig> ExperimentSpec::expand() const {
  std::vector<RisConfig> out;
  for (const SweepEntry& e : sweeps) {
    if (e.m_values.empty())
      throw ConfigError("sweep entry has no m_values");
    for (int m : e.m_values) out.push_back(e.config_for(m));
  }
  return out;
}

bool ExperimentResult::any_failed() const {
  return std::any_of(points.begin(), points.end(),
                     [](const SweepPointResult& p) { return !p.error.empty(); });
}

namespace {

SceneConfig parse_scene(const json& j) {
  reject_unknown_keys(j, "scene",
                      {"N", "K", "carrier_frequency", "d_tx_ris", "d_ris_user",
                       "rician_factor", "tx_power", "noise_power",
                       "path_loss_exponent"});
  SceneConfig s;
  read_field(j, "N", s.N);
  read_field(j, "K", s.K);
  read_field(j, "carrier_frequency", s.carrier_frequency);
  read_field(j, "d_tx_ris", s.d_tx_ris);
  read_field(j, "d_ris_user", s.d_ris_user);
  read_field(j, "rician_factor", s.rician_factor);
  read_field(j, "tx_power", s.tx_power);
  read_field(j, "noise_power", s.noise_power);
  read_field(j, "path_loss_exponent", s.path_loss_exponent);
  return s;
}

OptimizerParams parse_params(const json& j) {
  reject_unknown_keys(j, "params",
                      {"max_outer_iterations", "rel_tolerance", "initial_step",
                       "shrink", "sufficient_increase", "inner_steps"});
  OptimizerParams p;
  read_field(j, "max_outer_iterations", p.max_outer_iterations);
  read_field(j, "rel_tolerance", p.rel_tolerance);
  read_field(j, "initial_step", p.initial_step);
  read_field(j, "shrink", p.shrink);
  read_field(j, "sufficient_increase", p.sufficient_increase);
  read_field(j, "inner_steps", p.inner_steps);
  return p;
}

SweepEntry parse_sweep(const json& j) {
  reject_unknown_keys(j, "sweep entry",
                      {"m_values", "mode", "sectors", "architecture",
                       "group_size"});
  SweepEntry e;
  read_field(j, "m_values", e.m_values);
  std::string mode, arch;
  read_field(j, "mode", mode);
  read_field(j, "architecture", arch);
  if (!mode.empty()) e.mode = mode_from_string(mode);
  if (!arch.empty()) e.architecture = architecture_from_string(arch);
  read_field(j, "sectors", e.sectors);
  read_field(j, "group_size", e.group_size);
  return e;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  reject_unknown_keys(j, "config",
                      {"scene", "sweeps", "trials", "master_seed", "params",
                       "output_path", "metric", "warm_start"});
  ExperimentSpec spec;
  if (j.contains("scene")) spec.scene = parse_scene(j["scene"]);
  if (j.contains("params")) spec.params = parse_params(j["params"]);
  if (!j.contains("sweeps"))
    throw ConfigError("config requires a \"sweeps\" array");
  if (!j["sweeps"].is_array())
    throw ConfigError("\"sweeps\" must be an array");
  for (const json& s : j["sweeps"]) spec.sweeps.push_back(parse_sweep(s));
  read_field(j, "trials", spec.trials);
  read_field(j, "master_seed", spec.master_seed);
  read_field(j, "output_path", spec.output_path);
  std::string metric, warm;
  read_field(j, "metric", metric);
  read_field(j, "warm_start", warm);
  if (!metric.empty()) {
    if (metric == "sum_rate")
      spec.metric = Metric::SumRate;
    else if (metric == "power_oracle")
      spec.metric = Metric::PowerOracle;
    else
      throw ConfigError("metric must be sum_rate or power_oracle");
  }
  if (!warm.empty()) {
    if (warm == "none")
      spec.warm_start = WarmStart::None;
    else if (warm == "nested")
      spec.warm_start = WarmStart::Nested;
    else
      throw ConfigError("warm_start must be none or nested");
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_spec(text);
}

std::string spec_to_json(const ExperimentSpec& spec) {
  json j;
  j["scene"] = {{"N", spec.scene.N},
                {"K", spec.scene.K},
                {"carrier_frequency", spec.scene.carrier_frequency},
                {"d_tx_ris", spec.scene.d_tx_ris},
                {"d_ris_user", spec.scene.d_ris_user},
                {"rician_factor", spec.scene.rician_factor},
                {"tx_power", spec.scene.tx_power},
                {"noise_power", spec.scene.noise_power},
                {"path_loss_exponent", spec.scene.path_loss_exponent}};
  j["params"] = {{"max_outer_iterations", spec.params.max_outer_iterations},
                 {"rel_tolerance", spec.params.rel_tolerance},
                 {"initial_step", spec.params.initial_step},
                 {"shrink", spec.params.shrink},
                 {"sufficient_increase", spec.params.sufficient_increase},
                 {"inner_steps", spec.params.inner_steps}};
  j["sweeps"] = json::array();
  for (const SweepEntry& e : spec.sweeps) {
    json s = {{"m_values", e.m_values},
              {"mode", to_string(e.mode)},
              {"architecture", to_string(e.architecture)}};
    if (e.sectors != 0) s["sectors"] = e.sectors;
    if (e.group_size != 0) s["group_size"] = e.group_size;
    j["sweeps"].push_back(std::move(s));
  }
  j["trials"] = spec.trials;
  j["master_seed"] = spec.master_seed;
  if (!spec.output_path.empty()) j["output_path"] = spec.output_path;
  j["metric"] =
      spec.metric == Metric::SumRate ? "sum_rate" : "power_oracle";
  j["warm_start"] = spec.warm_start == WarmStart::None ? "none" : "nested";
  return j.dump(2);
}

std::uint64_t channel_seed(std::uint64_t master, int m, int sectors,
                           int trial) {
  std::uint64_t cls = (std::uint64_t(1) << 62) |
                      (static_cast<std::uint64_t>(m) << 16) |
                      static_cast<std::uint64_t>(sectors);
  return child_seed(master, cls, static_cast<std::uint64_t>(trial));
}

namespace {

struct TrialCell {
  double rate = 0.0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double wall_ms = 0.0;
};

// True when `from` can seed `to` exactly: identical propagation geometry and
// a feasible set contained in the target's.
bool embeds(const RisConfig& from, const RisConfig& to) {
  if (from.M != to.M || from.sectors != to.sectors) return false;
  if (from.architecture == Architecture::NonDiagonal ||
      to.architecture == Architecture::NonDiagonal)
    return false;
  if (from.architecture == Architecture::DynamicGroupConnected ||
      to.architecture == Architecture::DynamicGroupConnected)
    return false;
  return to.group_antennas() % from.group_antennas() == 0;
}

void run_trial(const ExperimentSpec& spec, const std::vector<RisConfig>& pts,
               int trial, std::vector<std::vector<TrialCell>>& cells,
               std::atomic<bool>* failed, std::vector<std::string>& errors,
               std::mutex& err_mutex) {
  // Carries the best embeddable solution forward within this trial.
  struct Warm {
    bool has = false;
    RisConfig config;
    ScatteringState state;
    Precoder precoder;
  } warm;

  for (size_t p = 0; p < pts.size(); ++p) {
    const RisConfig& config = pts[p];
    if (failed[p].load(std::memory_order_acquire)) continue;
    TrialCell& cell = cells[p][trial];
    auto t0 = std::chrono::steady_clock::now();
    try {
      std::uint64_t ch_seed =
          channel_seed(spec.master_seed, config.M, config.sectors, trial);
      Rng ch_rng(ch_seed);
      ChannelRealization ch = realize(spec.scene, config, ch_rng);
      cell.seed = ch_seed;

      if (spec.metric == Metric::PowerOracle) {
        cell.rate = config.architecture == Architecture::FullyConnected
                        ? oracle_power_fully(ch, spec.scene.tx_power)
                        : oracle_power_single_los(ch, spec.scene.tx_power);
        cell.iterations = 0;
      } else {
        SolveResult res;
        if (spec.warm_start == WarmStart::Nested && warm.has &&
            embeds(warm.config, config)) {
          res = solve_warm(ch, config, spec.scene, spec.params,
                           transfer_state(warm.state, config), warm.precoder);
        } else {
          Rng rng(child_seed(spec.master_seed, static_cast<std::uint64_t>(p),
                             static_cast<std::uint64_t>(trial)));
          res = solve(ch, config, spec.scene, spec.params, rng);
        }
        cell.rate = res.rate_trajectory.empty() ? 0.0
                                                : res.rate_trajectory.back();
        cell.iterations = res.iterations_used;
        if (spec.warm_start == WarmStart::Nested &&
            config.architecture != Architecture::NonDiagonal &&
            config.architecture != Architecture::DynamicGroupConnected) {
          warm.has = true;
          warm.config = config;
          warm.state = res.final_state;
          warm.precoder = res.final_precoder;
        }
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (errors[p].empty()) errors[p] = e.what();
      failed[p].store(true, std::memory_order_release);
    }
    cell.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  }
}

}  // namespace

ExperimentResult run(const ExperimentSpec& spec, int threads) {
  spec.validate();
  std::vector<RisConfig> pts = spec.expand();
  std::vector<std::vector<TrialCell>> cells(
      pts.size(), std::vector<TrialCell>(spec.trials));
  std::vector<std::string> errors(pts.size());
  std::unique_ptr<std::atomic<bool>[]> failed(
      new std::atomic<bool>[pts.size()]);
  for (size_t p = 0; p < pts.size(); ++p) failed[p].store(false);
  std::mutex err_mutex;

  if (threads < 1) threads = 1;
  if (threads == 1) {
    for (int t = 0; t < spec.trials; ++t)
      run_trial(spec, pts, t, cells, failed.get(), errors, err_mutex);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < spec.trials;
             t = next.fetch_add(1))
          run_trial(spec, pts, t, cells, failed.get(), errors, err_mutex);
      });
    for (std::thread& th : pool) th.join();
  }

  ExperimentResult result;
  result.spec = spec;
  result.points.reserve(pts.size());
  for (size_t p = 0; p < pts.size(); ++p) {
    SweepPointResult pr;
    pr.config = pts[p];
    pr.error = errors[p];
    if (pr.error.empty()) {
      pr.rates.reserve(spec.trials);
      for (const TrialCell& c : cells[p]) {
        pr.rates.push_back(c.rate);
        pr.seeds.push_back(c.seed);
        pr.iterations.push_back(c.iterations);
        pr.wall_ms.push_back(c.wall_ms);
      }
      double sum = 0.0;
      for (double r : pr.rates) sum += r;
      pr.mean_rate = sum / pr.rates.size();
      double sq = 0.0;
      for (double r : pr.rates) sq += (r - pr.mean_rate) * (r - pr.mean_rate);
      pr.std_rate =
          pr.rates.size() > 1 ? std::sqrt(sq / (pr.rates.size() - 1)) : 0.0;
      pr.ci95_halfwidth =
          1.96 * pr.std_rate / std::sqrt(static_cast<double>(pr.rates.size()));
    }
    result.points.push_back(std::move(pr));
  }
  return result;
}

std::string trials_csv(const ExperimentResult& result) {
  std::string out =
      "sweep_id,M,mode,architecture,group_size,trial,seed,sum_rate_bps_hz,"
      "iterations,wall_ms\n";
  char buf[64];
  for (size_t p = 0; p < result.points.size(); ++p) {
    const SweepPointResult& pr = result.points[p];
    if (!pr.error.empty()) continue;
    for (size_t t = 0; t < pr.rates.size(); ++t) {
      out += std::to_string(p) + ',' + std::to_string(pr.config.M) + ',' +
             to_string(pr.config.mode) + ',' +
             to_string(pr.config.architecture) + ',' +
             std::to_string(pr.config.group_antennas()) + ',' +
             std::to_string(t) + ',' + std::to_string(pr.seeds[t]) + ',' +
             fmt17(pr.rates[t]) + ',' + std::to_string(pr.iterations[t]) +
             ',';
      std::snprintf(buf, sizeof(buf), "%.3f", pr.wall_ms[t]);
      out += buf;
      out += '\n';
    }
  }
  return out;
}

std::string aggregate_csv(const ExperimentResult& result) {
  std::string out =
      "sweep_id,M,mode,architecture,group_size,trials,mean_rate,std_rate,"
      "ci95_halfwidth\n";
  for (size_t p = 0; p < result.points.size(); ++p) {
    const SweepPointResult& pr = result.points[p];
    if (!pr.error.empty()) continue;
    out += std::to_string(p) + ',' + std::to_string(pr.config.M) + ',' +
           to_string(pr.config.mode) + ',' +
           to_string(pr.config.architecture) + ',' +
           std::to_string(pr.config.group_antennas()) + ',' +
           std::to_string(pr.rates.size()) + ',' + fmt17(pr.mean_rate) + ',' +
           fmt17(pr.std_rate) + ',' + fmt17(pr.ci95_halfwidth) + '\n';
  }
  return out;
}

std::string result_json(const ExperimentResult& result) {
  json j;
  j["spec"] = json::parse(spec_to_json(result.spec));
  j["points"] = json::array();
  for (size_t p = 0; p < result.points.size(); ++p) {
    const SweepPointResult& pr = result.points[p];
    json pt;
    pt["sweep_id"] = p;
    pt["M"] = pr.config.M;
    pt["mode"] = to_string(pr.config.mode);
    pt["architecture"] = to_string(pr.config.architecture);
    pt["group_size"] = pr.config.group_antennas();
    if (!pr.error.empty()) {
      pt["error"] = pr.error;
    } else {
      pt["rates"] = pr.rates;
      pt["seeds"] = pr.seeds;
      pt["iterations"] = pr.iterations;
      pt["wall_ms"] = pr.wall_ms;
      pt["mean_rate"] = pr.mean_rate;
      pt["std_rate"] = pr.std_rate;
      pt["ci95_halfwidth"] = pr.ci95_halfwidth;
    }
    j["points"].push_back(std::move(pt));
  }
  return j.dump(2);
}

void write_results(const ExperimentResult& result,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto put = [&](const char* name, const std::string& text) {
    std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
    if (!f) throw ConfigError(std::string("cannot write ") + name);
    f << text;
  };
  put("trials.csv", trials_csv(result));
  put("aggregate.csv", aggregate_csv(result));
  put("result.json", result_json(result));
}

ExperimentSpec preset_fig3(const std::string& side) {
  ExperimentSpec spec;
  spec.trials = 20;
  spec.master_seed = 2024;
  std::vector<int> ms = {16, 32, 64};
  if (side == "reflective") {
    spec.sweeps = {
        {ms, Mode::Reflective, 1, Architecture::SingleConnected, 0},
        {ms, Mode::Reflective, 1, Architecture::GroupConnected, 2},
        {ms, Mode::Reflective, 1, Architecture::GroupConnected, 4},
        {ms, Mode::Reflective, 1, Architecture::FullyConnected, 0},
    };
  } else if (side == "fullspace") {
    spec.sweeps = {
        {ms, Mode::Hybrid, 2, Architecture::SingleConnected, 0},
        {ms, Mode::Hybrid, 2, Architecture::GroupConnected, 4},
        {ms, Mode::Hybrid, 2, Architecture::FullyConnected, 0},
        {ms, Mode::MultiSector, 4, Architecture::SingleConnected, 0},
        {ms, Mode::MultiSector, 4, Architecture::GroupConnected, 8},
        {ms, Mode::MultiSector, 4, Architecture::FullyConnected, 0},
    };
  } else {
    throw ConfigError("fig3 side must be reflective or fullspace");
  }
  spec.validate();
  return spec;
}

ExperimentSpec preset_power_gain() {
  ExperimentSpec spec;
  spec.scene.N = 1;
  spec.scene.K = 1;
  spec.scene.rician_factor = 0.0;  // i.i.d. Rayleigh
  spec.trials = 500;
  spec.master_seed = 7;
  spec.metric = Metric::PowerOracle;
  spec.sweeps = {
      {{64}, Mode::Reflective, 1, Architecture::SingleConnected, 0},
      {{64}, Mode::Reflective, 1, Architecture::FullyConnected, 0},
  };
  spec.validate();
  return spec;
}

std::string complexity_table_csv(int m) {
  struct Row {
    Mode mode;
    int sectors;
    Architecture arch;
    int group_size;
  };
  const std::vector<Row> rows = {
      {Mode::Reflective, 1, Architecture::SingleConnected, 0},
      {Mode::Reflective, 1, Architecture::GroupConnected, 2},
      {Mode::Reflective, 1, Architecture::FullyConnected, 0},
      {Mode::Hybrid, 2, Architecture::SingleConnected, 0},
      {Mode::Hybrid, 2, Architecture::GroupConnected, 4},
      {Mode::Hybrid, 2, Architecture::FullyConnected, 0},
      {Mode::MultiSector, 4, Architecture::SingleConnected, 0},
      {Mode::MultiSector, 4, Architecture::GroupConnected, 8},
      {Mode::MultiSector, 4, Architecture::FullyConnected, 0},
  };
  std::string out = "mode,architecture,group_size,M,components\n";
  for (const Row& r : rows) {
    RisConfig c;
    c.M = m;
    c.mode = r.mode;
    c.sectors = r.sectors;
    c.architecture = r.arch;
    c.group_size = r.group_size;
    c.validate();
    out += to_string(c.mode) + ',' + to_string(c.architecture) + ',' +
           std::to_string(c.group_antennas()) + ',' + std::to_string(c.M) +
           ',' + std::to_string(circuit_complexity(c)) + '\n';
  }
  return out;
}

}  // namespace bdris
