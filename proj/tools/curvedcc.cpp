#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>

#include "curvedcc/config_io.hpp"
#include "curvedcc/runner.hpp"

int main(int argc, char** argv) {
  using namespace curvedcc;
  CLI::App app{"Central configurations on S^3 and H^3"};
  app.set_version_flag("--version", kToolkitVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  const std::map<std::string, std::string> about{
      {"solve-geodesic", "enumerate geodesic OCCs on H^1 or on the S^1 arc of M_c"},
      {"solve-planar", "multistart search for OCCs on H^2 or M_c"},
      {"index", "Morse indices, spectrum of A and derivative oracles"},
      {"dynamics-verify", "integrate relative equilibria against their closed form"},
      {"compactness", "multiplier divergence and neighborhood exclusion probes"},
      {"palmore-count", "multistart search checked against the Palmore lower bound"}};
  for (const std::string& name : known_commands()) {
    CLI::App* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : "");
    sub->add_option("--config", config_path, "experiment config (YAML)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the seed in the config");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = load_experiment_config(config_path, seed);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (cfg.command != command) {
    std::cerr << "config error: " << config_path << " is a '" << cfg.command << "' config, not '" << command << "'\n";
    return kExitConfig;
  }
  if (jobs) cfg.jobs = *jobs;
  if (!out_dir.empty()) cfg.output = out_dir;
  if (cfg.output.empty()) cfg.output = "curvedcc_out/" + (cfg.name.empty() ? cfg.command : cfg.name);

  const RunResult r = run(cfg);
  try {
    write_outputs(r, cfg.output);
  } catch (const Error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  for (const Assertion& a : r.assertions)
    std::cout << (a.passed ? "PASS " : "FAIL ") << a.name << ": " << a.detail << "\n";
  if (r.envelope.contains("error")) std::cerr << r.envelope["error"].get<std::string>() << "\n";
  std::cout << "status " << r.envelope["status"].get<std::string>() << ", envelope " << cfg.output
            << "/envelope.json\n";
  return r.exit_code;
}
