#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpidos/harness/config.hpp"
#include "wpidos/harness/experiments.hpp"
#include "wpidos/harness/report.hpp"

namespace fs = std::filesystem;
using namespace wpidos::harness;

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

// Refusals before the run starts still leave a diagnostic in the output directory.
int fail_early(const RunOptions& opts, const std::string& experiment, const std::string& message) {
  std::cerr << "error: " << message << '\n';
  const fs::path dir = opts.out.empty() ? fs::path("runs") / experiment : fs::path(opts.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) std::ofstream(dir / "diagnostic.txt") << message << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Poincare certificates and decay envelopes from density-of-states bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::vector<std::pair<std::string, RunOptions>> runs;
  runs.reserve(experiment_names().size());
  for (const std::string& name : experiment_names()) {
    runs.emplace_back(name, RunOptions{});
    RunOptions& opts = runs.back().second;
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", opts.config, "JSON config file");
    sub->add_option("--seed", opts.seed, "Random seed");
    sub->add_option("--out", opts.out, "Output directory");
    sub->add_option("--override", opts.overrides, "key=value override (repeatable)")->take_all();
  }
  std::string run_a, run_b;
  CLI::App* compare = app.add_subcommand("compare", "Diff the manifests of two runs");
  compare->add_option("run_a", run_a)->required();
  compare->add_option("run_b", run_b)->required();

  CLI11_PARSE(app, argc, argv);

  if (compare->parsed()) {
    try {
      write_report(std::cout, compare_report(run_a, run_b));
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }

  for (auto& [name, opts] : runs) {
    if (!app.got_subcommand(name)) continue;
    std::optional<ExperimentConfig> cfg;
    try {
      cfg = load_config(name, opts.config);
      for (const std::string& o : opts.overrides) cfg->apply_override(o);
      if (opts.seed) cfg->set("seed", *opts.seed);
      if (!opts.out.empty()) cfg->set("out_dir", opts.out);
    } catch (const std::exception& e) {
      return fail_early(opts, name, e.what());
    }
    const int status = run_experiment(*cfg);
    const fs::path dir = cfg->out_dir();
    if (status == 2) {
      std::ifstream diag(dir / "diagnostic.txt");
      std::cerr << "error: " << std::string(std::istreambuf_iterator<char>(diag), {});
    } else {
      std::cout << name << ": " << (status == 0 ? "all checks passed" : "some checks failed") << " (" << dir.string()
                << "/manifest.json)\n";
    }
    return status;
  }
  return 2;
}
