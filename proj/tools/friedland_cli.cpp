#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "friedland/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entropy experiments for finitely generated circle and torus actions"};

  std::string config_path;
  std::string command_override;
  std::string out_override;
  long budget_override = -1;
  long seed_override = -1;
  int threads_override = 0;

  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--command", command_override, "override the configured command");
  app.add_option("--out", out_override, "override the output directory");
  app.add_option("--budget", budget_override, "override the candidate budget");
  app.add_option("--seed", seed_override, "override the random seed");
  app.add_option("--threads", threads_override, "worker threads (0 = library default)");

  CLI11_PARSE(app, argc, argv);

  try {
    friedland::ExperimentConfig config = friedland::parse_config_file(config_path);
    if (!command_override.empty()) config.command = command_override;
    if (!out_override.empty()) config.out_dir = out_override;
    if (budget_override > 0) config.budget = static_cast<std::size_t>(budget_override);
    if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
    if (threads_override > 0) config.threads = threads_override;

    friedland::RunReport report = friedland::run(config);
    auto paths = friedland::emit(report, config.out_dir);

    std::cout << friedland::to_csv(report);
    for (const auto& line : report.summary) std::cout << "# " << line << "\n";
    for (const auto& p : paths) std::cout << "# wrote " << p << "\n";
    std::cout << "# ok " << (report.ok ? "true" : "false") << "\n";
    return report.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
