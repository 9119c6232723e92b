#include <CLI11.hpp>
#include <Eigen/Core>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "elgrat/cli.hpp"
#include "elgrat/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive DtN finite element solver for elastic scattering by periodic gratings"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int threads = 0;
  unsigned long seed = 0;

  const std::map<std::string, elgrat::RunMode> modes = {
      {"solve", elgrat::RunMode::Solve},
      {"adapt", elgrat::RunMode::Adapt},
      {"study", elgrat::RunMode::Study},
  };
  const std::map<std::string, std::string> blurbs = {
      {"solve", "one assemble/solve pass on the initial mesh"},
      {"adapt", "adaptive refinement loop driven by the a posteriori estimator"},
      {"study", "uniform refinement convergence study"},
  };
  for (const auto& [name, mode] : modes) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", config_path, "run configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", threads, "worker threads for dense kernels (default: all)");
    sub->add_option("--seed", seed, "reserved; the pipeline is deterministic");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    elgrat::RunConfig config = elgrat::load_config(config_path);
    config.mode = modes.at(app.get_subcommands().front()->get_name());
    if (!out_dir.empty()) config.output.directory = out_dir;
    if (threads > 0) Eigen::setNbThreads(threads);
    return elgrat::run(config);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
