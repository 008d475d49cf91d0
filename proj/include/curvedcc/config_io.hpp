#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedcc/compactness.hpp"
#include "curvedcc/geometry.hpp"

namespace curvedcc {

// A configuration on disk: masses, curvature and either angle or ambient
// coordinates (never both).
struct ConfigurationFile {
  Curvature curvature = Curvature::Hyperbolic;
  MassList masses;
  Configuration q;
  std::optional<Eigen::VectorXd> angles;  // set for angle-form files
  std::optional<double> lambda;
};

ConfigurationFile parse_configuration(const std::string& text, const std::string& source = "<string>",
                                      const Tolerances& tol = default_tolerances());
ConfigurationFile load_configuration_file(const std::filesystem::path& path,
                                          const Tolerances& tol = default_tolerances());
// 17 significant digits, so a load of the result reproduces every double.
std::string format_configuration(const ConfigurationFile& cf);
void save_configuration_file(const std::filesystem::path& path, const ConfigurationFile& cf);

const std::vector<std::string>& known_commands();

// One (sigma, masses, c) combination to solve.
struct ProblemCase {
  Curvature curvature = Curvature::Hyperbolic;
  MassList masses;
  double c = 1.0;
};

struct DivergenceSpec {
  FamilyKind kind = FamilyKind::HPolygon;
  MassList masses;
  double theta_hi = 1e-1, theta_lo = 1e-4;
  int per_decade = 4;
  double slope_target = -3.0, slope_tolerance = 0.1;
};

struct ExclusionSpec {
  std::string label;
  ConfigurationFile center;
  std::vector<double> radii;
  int samples = 10000;
  std::optional<FamilyKind> family;  // expected to enter every ball when set
  bool expect_excluded = true;
  double threshold_factor = 10.0;    // exclusion means min residual > factor * eps_cc
};

struct ExperimentConfig {
  std::string command;
  std::string name;
  std::uint64_t seed = 0;
  int jobs = 1;
  Tolerances tol = default_tolerances();
  std::string output;            // output directory, may be empty
  double max_runtime_s = 0.0;    // 0 disables the runtime assertion
  std::vector<ProblemCase> cases;

  // index
  std::optional<ConfigurationFile> configuration;  // index a supplied configuration instead of solving
  int oracle_samples = 0;                          // finite-difference checks per curvature

  // solve-planar, palmore-count
  int starts = 0;
  int min_instances = 0;
  int tau_samples = 0;           // spherical OCCs to map through tau
  bool two_body_continuum = false;
  double two_body_mass = 1.0;
  int two_body_samples = 20;
  double two_body_delta = 1e-2;

  // dynamics-verify
  double T = 5.0;
  double dt = 1e-3;
  std::vector<double> s_values{0.0};
  int residual_samples = 50;
  bool require_all_kinds = true;

  // compactness
  std::vector<DivergenceSpec> divergence;
  std::vector<ExclusionSpec> exclusion;

  nlohmann::ordered_json echo;  // the parsed input, echoed into the envelope
};

// Parses and validates an experiment config. base_dir resolves relative
// configuration_file entries; seed_override replaces the seed before any
// random mass sets are drawn. Throws ConfigError with field context.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source = "<string>",
                                         const std::filesystem::path& base_dir = {},
                                         std::optional<std::uint64_t> seed_override = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        std::optional<std::uint64_t> seed_override = {});

// Each override must stay within a factor 1e3 of its default.
void validate_tolerances(const Tolerances& tol);

}  // namespace curvedcc
