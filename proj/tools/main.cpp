#include <cstdint>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bgw/errors.hpp"
#include "commands.hpp"

namespace {

constexpr int kExitConfig = 2;

int exit_code_for(const bgw::Error& e) {
  switch (e.code()) {
    case bgw::ErrorCode::kConfig:
    case bgw::ErrorCode::kSyntax:
    case bgw::ErrorCode::kParameter:
    case bgw::ErrorCode::kConstraint:
    case bgw::ErrorCode::kDegenerateCovariance:
      return kExitConfig;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sex branching chains and their jump-diffusion limits"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_dir;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (overrides config and BGW_THREADS)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--config", config_path, "JSON run configuration")->required();

  using Command = std::function<int(const bgw::cli::RunConfig&, std::ostream&)>;
  Command chosen;
  auto add = [&](const char* name, const char* help, Command fn) {
    app.add_subcommand(name, help)->callback([&chosen, fn] { chosen = fn; });
  };
  add("simulate-chain", "Simulate rescaled chain ensembles to CSV", bgw::cli::cmd_simulate_chain);
  add("simulate-sde", "Integrate the jump diffusion to CSV", bgw::cli::cmd_simulate_sde);
  add("check", "Check the uniqueness hypotheses", bgw::cli::cmd_check);
  add("generator-check", "Empirical vs limiting generator table", bgw::cli::cmd_generator_check);
  add("convergence", "Chain vs SDE convergence study", bgw::cli::cmd_convergence);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto config = bgw::cli::RunConfig::load(config_path);
    if (*seed_opt) config.set_seed(seed);
    if (*threads_opt) config.set_threads(threads);
    if (*out_opt) config.set_output_dir(out_dir);
    return chosen(config, std::cout);
  } catch (const bgw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
