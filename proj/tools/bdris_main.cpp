#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bdris/errors.hpp"
#include "bdris/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw bdris::ConfigError("cannot write " + path.string());
  f << text;
}

int finish_run(const bdris::ExperimentResult& result,
               const std::string& out_dir) {
  bdris::write_results(result, out_dir);
  std::cout << "wrote " << out_dir << "/trials.csv, aggregate.csv, result.json"
            << std::endl;
  if (result.any_failed()) {
    for (const auto& p : result.points)
      if (!p.error.empty())
        std::cerr << "sweep point M=" << p.config.M << " "
                  << to_string(p.config.architecture)
                  << " failed: " << p.error << std::endl;
    return kExitSolver;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BD-RIS sum-rate experiment runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset_name;
  int trials = 0;
  std::uint64_t seed = 0;
  int threads = 1;

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("--config", config_path, "JSON experiment config")
      ->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* run_trials = run_cmd->add_option("--trials", trials);
  CLI::Option* run_seed = run_cmd->add_option("--seed", seed);
  run_cmd->add_option("--threads", threads);

  CLI::App* preset_cmd =
      app.add_subcommand("preset", "Run a built-in experiment");
  preset_cmd
      ->add_option("name", preset_name,
                   "fig3-reflective | fig3-fullspace | power-gain | "
                   "complexity-table")
      ->required();
  preset_cmd->add_option("--out", out_dir, "Output directory")->required();
  CLI::Option* preset_trials = preset_cmd->add_option("--trials", trials);
  CLI::Option* preset_seed = preset_cmd->add_option("--seed", seed);
  preset_cmd->add_option("--threads", threads);

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("--config", config_path, "JSON experiment config")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      bdris::ExperimentSpec spec = bdris::load_spec(config_path);
      if (run_trials->count()) spec.trials = trials;
      if (run_seed->count()) spec.master_seed = seed;
      spec.validate();
      return finish_run(bdris::run(spec, threads), out_dir);
    }

    if (preset_cmd->parsed()) {
      std::filesystem::create_directories(out_dir);
      if (preset_name == "complexity-table") {
        write_file(std::filesystem::path(out_dir) / "complexity_table.csv",
                   bdris::complexity_table_csv());
        std::cout << "wrote " << out_dir << "/complexity_table.csv"
                  << std::endl;
        return kExitOk;
      }
      bdris::ExperimentSpec spec;
      if (preset_name == "fig3-reflective")
        spec = bdris::preset_fig3("reflective");
      else if (preset_name == "fig3-fullspace")
        spec = bdris::preset_fig3("fullspace");
      else if (preset_name == "power-gain")
        spec = bdris::preset_power_gain();
      else
        throw bdris::ConfigError("unknown preset: " + preset_name);
      if (preset_trials->count()) spec.trials = trials;
      if (preset_seed->count()) spec.master_seed = seed;
      spec.validate();
      write_file(std::filesystem::path(out_dir) / "spec.json",
                 bdris::spec_to_json(spec));
      bdris::ExperimentResult result = bdris::run(spec, threads);
      int code = finish_run(result, out_dir);
      if (preset_name == "power-gain" && code == kExitOk) {
        double single = result.points[0].mean_rate;
        double fully = result.points[1].mean_rate;
        std::cout << "mean received power single=" << single
                  << " W, fully=" << fully << " W, ratio=" << fully / single
                  << std::endl;
      }
      return code;
    }

    if (validate_cmd->parsed()) {
      bdris::ExperimentSpec spec = bdris::load_spec(config_path);
      std::cout << "config ok: " << spec.expand().size()
                << " sweep points, " << spec.trials << " trials" << std::endl;
      return kExitOk;
    }
  } catch (const bdris::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitSolver;
  }
  return kExitOk;
}
