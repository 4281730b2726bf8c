#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "morrey/config.hpp"
#include "morrey/error.hpp"
#include "morrey/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Morrey seminorm toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = 0;
  std::uint64_t seed = 0;
  bool inject_fault = false;

  for (std::string_view name : morrey::kCommands) {
    CLI::App* sub = app.add_subcommand(std::string(name));
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0: hardware); MORREY_THREADS overrides");
    sub->add_option("--seed", seed, "seed for randomized corpus members");
    if (name == "selftest") sub->add_flag("--inject-fault", inject_fault, "corrupt the semigroup multiplier");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : morrey::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    morrey::ExperimentConfig cfg = config_path.empty() ? morrey::parse_config("{}") : morrey::load_config(config_path);
    if (sub->count("--seed")) cfg.seed = seed;
    morrey::RunOptions opt;
    opt.threads = threads;
    opt.inject_fault = inject_fault;
    return morrey::run_command(sub->get_name(), cfg, opt, out_dir, std::cout);
  } catch (const morrey::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return morrey::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return morrey::kExitError;
  }
}
