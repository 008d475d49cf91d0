#include "curvedcc/config_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

namespace curvedcc {

namespace {

std::string where(const YAML::Node& n, const std::string& source) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return source;
  return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& source, const std::string& field, const std::string& msg) {
  throw ConfigError(where(n, source) + ": " + field + ": " + msg);
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& source, const std::string& field) {
  if (!n.IsScalar()) fail(n, source, field, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, source, field, "cannot read value '" + n.Scalar() + "'");
  }
}

double finite(const YAML::Node& n, const std::string& source, const std::string& field) {
  const double v = scalar<double>(n, source, field);
  if (!std::isfinite(v)) fail(n, source, field, "must be finite");
  return v;
}

std::vector<double> number_list(const YAML::Node& n, const std::string& source, const std::string& field) {
  if (!n.IsSequence()) fail(n, source, field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(finite(n[i], source, field + "[" + std::to_string(i) + "]"));
  return out;
}

void check_keys(const YAML::Node& n, const std::string& source, const std::string& field,
                const std::set<std::string>& allowed) {
  if (!n.IsMap()) fail(n, source, field, "expected a mapping");
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, source, field.empty() ? key : field + "." + key, "unknown key");
  }
}

MassList masses_from(const YAML::Node& n, const std::string& source, const std::string& field) {
  const std::vector<double> v = number_list(n, source, field);
  try {
    return MassList::from_vector(v);
  } catch (const ConfigError& e) {
    fail(n, source, field, e.what());
  }
}

Curvature sigma_from(const YAML::Node& n, const std::string& source, const std::string& field) {
  const int s = scalar<int>(n, source, field);
  if (s != 1 && s != -1) fail(n, source, field, "sigma must be +1 or -1");
  return curvature_from_sign(s);
}

nlohmann::ordered_json to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Sequence: {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (const auto& e : n) a.push_back(to_json(e));
      return a;
    }
    case YAML::NodeType::Map: {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      for (const auto& kv : n) o[kv.first.as<std::string>()] = to_json(kv.second);
      return o;
    }
    case YAML::NodeType::Scalar: {
      const std::string s = n.Scalar();
      if (n.Tag() == "!") return s;  // quoted
      long long i;
      double d;
      bool b;
      if (YAML::convert<long long>::decode(n, i)) return i;
      if (YAML::convert<double>::decode(n, d)) return d;
      if (YAML::convert<bool>::decode(n, b)) return b;
      return s;
    }
    default: return nullptr;
  }
}

ConfigurationFile configuration_from(const YAML::Node& root, const std::string& source, const Tolerances& tol) {
  check_keys(root, source, "", {"sigma", "masses", "angles", "ambient", "lambda"});
  if (!root["sigma"]) fail(root, source, "sigma", "missing");
  if (!root["masses"]) fail(root, source, "masses", "missing");
  ConfigurationFile cf;
  cf.curvature = sigma_from(root["sigma"], source, "sigma");
  cf.masses = masses_from(root["masses"], source, "masses");
  const int n = cf.masses.size();
  const bool has_angles = bool(root["angles"]), has_ambient = bool(root["ambient"]);
  if (has_angles && has_ambient)
    fail(root, source, "angles/ambient", "give either angles or ambient coordinates, not both");
  if (!has_angles && !has_ambient) fail(root, source, "angles/ambient", "one coordinate form is required");
  const YAML::Node pts = has_angles ? root["angles"] : root["ambient"];
  const std::string field = has_angles ? "angles" : "ambient";
  const std::size_t width = has_angles ? 2 : 4;
  if (!pts.IsSequence() || pts.size() != std::size_t(n))
    fail(pts, source, field, "expected one entry per mass (" + std::to_string(n) + ")");
  if (has_angles) {
    Eigen::VectorXd a(2 * n);
    for (int i = 0; i < n; ++i) {
      const std::vector<double> p = number_list(pts[i], source, field + "[" + std::to_string(i) + "]");
      if (p.size() != width) fail(pts[i], source, field + "[" + std::to_string(i) + "]", "expected [theta, phi]");
      a[i] = p[0];
      a[n + i] = p[1];
    }
    try {
      cf.q = embed_angles<double>(a, cf.curvature);
    } catch (const ChartError& e) {
      fail(pts, source, field, e.what());
    }
    cf.angles = a;
  } else {
    cf.q.resize(4, n);
    for (int i = 0; i < n; ++i) {
      const std::vector<double> p = number_list(pts[i], source, field + "[" + std::to_string(i) + "]");
      if (p.size() != width) fail(pts[i], source, field + "[" + std::to_string(i) + "]", "expected [x, y, z, w]");
      cf.q.col(i) << p[0], p[1], p[2], p[3];
    }
    try {
      validate_configuration(cf.q, cf.curvature, tol.eps_mfld);
    } catch (const ManifoldError& e) {
      fail(pts[e.particle], source, field + "[" + std::to_string(e.particle) + "]", e.what());
    }
  }
  if (root["lambda"]) cf.lambda = finite(root["lambda"], source, "lambda");
  return cf;
}

YAML::Node load_yaml(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                      ": parse error: " + e.msg);
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt17(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

}  // namespace

ConfigurationFile parse_configuration(const std::string& text, const std::string& source, const Tolerances& tol) {
  return configuration_from(load_yaml(text, source), source, tol);
}

ConfigurationFile load_configuration_file(const std::filesystem::path& path, const Tolerances& tol) {
  return parse_configuration(read_file(path), path.string(), tol);
}

std::string format_configuration(const ConfigurationFile& cf) {
  std::ostringstream out;
  const int n = cf.masses.size();
  out << "sigma: " << sign(cf.curvature) << "\nmasses: [";
  for (int i = 0; i < n; ++i) out << (i ? ", " : "") << fmt17(cf.masses[i]);
  out << "]\n";
  if (cf.angles) {
    out << "angles:\n";
    for (int i = 0; i < n; ++i) out << "  - [" << fmt17((*cf.angles)[i]) << ", " << fmt17((*cf.angles)[n + i]) << "]\n";
  } else {
    out << "ambient:\n";
    for (int i = 0; i < n; ++i)
      out << "  - [" << fmt17(cf.q(0, i)) << ", " << fmt17(cf.q(1, i)) << ", " << fmt17(cf.q(2, i)) << ", "
          << fmt17(cf.q(3, i)) << "]\n";
  }
  if (cf.lambda) out << "lambda: " << fmt17(*cf.lambda) << "\n";
  return out.str();
}

void save_configuration_file(const std::filesystem::path& path, const ConfigurationFile& cf) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << format_configuration(cf);
}

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> c{"solve-geodesic", "solve-planar", "index",
                                          "dynamics-verify", "compactness",  "palmore-count"};
  return c;
}

void validate_tolerances(const Tolerances& tol) {
  const Tolerances& d = default_tolerances();
  auto check = [](const char* name, double v, double def) {
    if (!(v > 0.0) || v > def * 1e3 || v < def * 1e-3)
      throw ConfigError(std::string("tolerances.") + name + ": " + fmt17(v) + " is not within a factor 1000 of " +
                        fmt17(def));
  };
  check("eps_mfld", tol.eps_mfld, d.eps_mfld);
  check("eps_class", tol.eps_class, d.eps_class);
  check("d_min", tol.d_min, d.d_min);
  check("h_fd_grad", tol.h_fd_grad, d.h_fd_grad);
  check("h_fd_hess", tol.h_fd_hess, d.h_fd_hess);
  check("eps_fd", tol.eps_fd, d.eps_fd);
  check("eps_fd_abs", tol.eps_fd_abs, d.eps_fd_abs);
  check("eps_cc", tol.eps_cc, d.eps_cc);
  check("eps_con", tol.eps_con, d.eps_con);
  check("max_iter", tol.max_iter, d.max_iter);
  check("tol_zero_rel", tol.tol_zero_rel, d.tol_zero_rel);
  check("gap_min", tol.gap_min, d.gap_min);
  check("eps_dyn", tol.eps_dyn, d.eps_dyn);
  check("newton_tol", tol.newton_tol, d.newton_tol);
}

namespace {

Tolerances tolerances_from(const YAML::Node& n, const std::string& source) {
  Tolerances t = default_tolerances();
  const std::vector<std::pair<const char*, double*>> fields{
      {"eps_mfld", &t.eps_mfld},   {"eps_class", &t.eps_class}, {"d_min", &t.d_min},
      {"h_fd_grad", &t.h_fd_grad}, {"h_fd_hess", &t.h_fd_hess}, {"eps_fd", &t.eps_fd},
      {"eps_fd_abs", &t.eps_fd_abs}, {"eps_cc", &t.eps_cc},   {"eps_con", &t.eps_con},
      {"tol_zero_rel", &t.tol_zero_rel}, {"gap_min", &t.gap_min}, {"eps_dyn", &t.eps_dyn},
      {"newton_tol", &t.newton_tol}};
  std::set<std::string> allowed{"max_iter"};
  for (const auto& f : fields) allowed.insert(f.first);
  check_keys(n, source, "tolerances", allowed);
  for (const auto& f : fields)
    if (n[f.first]) *f.second = finite(n[f.first], source, std::string("tolerances.") + f.first);
  if (n["max_iter"]) t.max_iter = scalar<int>(n["max_iter"], source, "tolerances.max_iter");
  try {
    validate_tolerances(t);
  } catch (const ConfigError& e) {
    fail(n, source, "tolerances", e.what());
  }
  return t;
}

// Expands sigma x masses x c of one group into cases.
std::vector<ProblemCase> cases_from(const YAML::Node& g, const std::string& source, const std::string& field,
                                    std::uint64_t seed, bool c_required) {
  std::vector<Curvature> sigmas;
  if (!g["sigma"]) fail(g, source, field + "sigma", "missing");
  if (g["sigma"].IsSequence()) {
    for (std::size_t i = 0; i < g["sigma"].size(); ++i) sigmas.push_back(sigma_from(g["sigma"][i], source, field + "sigma"));
  } else {
    sigmas.push_back(sigma_from(g["sigma"], source, field + "sigma"));
  }

  std::vector<MassList> sets;
  const int forms = bool(g["masses"]) + bool(g["mass_sets"]) + bool(g["random_mass_sets"]);
  if (forms != 1) fail(g, source, field + "masses", "give exactly one of masses, mass_sets, random_mass_sets");
  if (g["masses"]) sets.push_back(masses_from(g["masses"], source, field + "masses"));
  if (g["mass_sets"]) {
    const YAML::Node ms = g["mass_sets"];
    if (!ms.IsSequence() || ms.size() == 0) fail(ms, source, field + "mass_sets", "expected a non-empty list");
    for (std::size_t i = 0; i < ms.size(); ++i)
      sets.push_back(masses_from(ms[i], source, field + "mass_sets[" + std::to_string(i) + "]"));
  }
  if (g["random_mass_sets"]) {
    const YAML::Node r = g["random_mass_sets"];
    const std::string f = field + "random_mass_sets";
    check_keys(r, source, f, {"sizes", "count", "low", "high"});
    if (!r["sizes"] || !r["count"]) fail(r, source, f, "sizes and count are required");
    const std::vector<double> sizes = number_list(r["sizes"], source, f + ".sizes");
    const int count = scalar<int>(r["count"], source, f + ".count");
    const double lo = r["low"] ? finite(r["low"], source, f + ".low") : 0.5;
    const double hi = r["high"] ? finite(r["high"], source, f + ".high") : 2.0;
    if (!(lo > 0.0 && hi >= lo)) fail(r, source, f, "need 0 < low <= high");
    if (count < 1) fail(r["count"], source, f + ".count", "must be positive");
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), 0x6d617373u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(lo, hi);
    for (double sz : sizes) {
      const int n = static_cast<int>(sz);
      if (n < 2 || n != sz) fail(r["sizes"], source, f + ".sizes", "sizes must be integers >= 2");
      for (int k = 0; k < count; ++k) {
        Eigen::VectorXd m(n);
        for (int i = 0; i < n; ++i) m[i] = u(rng);
        sets.push_back(MassList(m));
      }
    }
  }

  const int cforms = bool(g["c"]) + bool(g["c_values"]) + bool(g["c_over_m1"]);
  if (cforms > 1) fail(g, source, field + "c", "give at most one of c, c_values, c_over_m1");
  if (cforms == 0 && c_required) fail(g, source, field + "c", "missing");
  std::vector<double> cs{1.0};
  bool relative = false;
  if (g["c"]) cs = {finite(g["c"], source, field + "c")};
  if (g["c_values"]) cs = number_list(g["c_values"], source, field + "c_values");
  if (g["c_over_m1"]) {
    cs = number_list(g["c_over_m1"], source, field + "c_over_m1");
    relative = true;
  }
  for (double c : cs)
    if (!(c > 0.0)) fail(g, source, field + "c", "inertia levels must be positive");

  std::vector<ProblemCase> out;
  for (Curvature k : sigmas)
    for (const MassList& m : sets)
      for (double c : cs) out.push_back({k, m, relative ? c * m.min() : c});
  return out;
}

const std::set<std::string> kGroupKeys{"seed", "sigma", "masses", "mass_sets", "random_mass_sets", "c", "c_values", "c_over_m1"};

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir,
                                         std::optional<std::uint64_t> seed_override) {
  const YAML::Node root = load_yaml(text, source);
  if (!root.IsMap()) throw ConfigError(source + ": expected a mapping at the top level");
  std::set<std::string> top{"command", "name",  "seed",     "jobs",     "output",      "max_runtime_s",
                            "tolerances", "groups", "index", "planar", "dynamics", "compactness"};
  top.insert(kGroupKeys.begin(), kGroupKeys.end());
  check_keys(root, source, "", top);

  ExperimentConfig cfg;
  cfg.echo = to_json(root);
  if (!root["command"]) fail(root, source, "command", "missing");
  cfg.command = scalar<std::string>(root["command"], source, "command");
  const auto& cmds = known_commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
    fail(root["command"], source, "command", "unknown command '" + cfg.command + "'");
  if (root["name"]) cfg.name = scalar<std::string>(root["name"], source, "name");
  if (root["seed"]) cfg.seed = scalar<std::uint64_t>(root["seed"], source, "seed");
  if (seed_override) cfg.seed = *seed_override;
  if (root["jobs"]) cfg.jobs = scalar<int>(root["jobs"], source, "jobs");
  if (cfg.jobs < 1) fail(root["jobs"], source, "jobs", "must be at least 1");
  if (root["output"]) cfg.output = scalar<std::string>(root["output"], source, "output");
  if (root["max_runtime_s"]) cfg.max_runtime_s = finite(root["max_runtime_s"], source, "max_runtime_s");
  if (root["tolerances"]) cfg.tol = tolerances_from(root["tolerances"], source);

  const bool needs_cases = cfg.command != "compactness";
  const bool top_group = bool(root["sigma"]) || bool(root["masses"]) || bool(root["mass_sets"]) ||
                         bool(root["random_mass_sets"]);
  if (root["groups"] && top_group) fail(root, source, "groups", "use either groups or top-level sigma/masses");
  if (root["groups"]) {
    const YAML::Node gs = root["groups"];
    if (!gs.IsSequence() || gs.size() == 0) fail(gs, source, "groups", "expected a non-empty list");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      const std::string f = "groups[" + std::to_string(i) + "].";
      check_keys(gs[i], source, f, kGroupKeys);
      const std::uint64_t gseed = gs[i]["seed"] ? scalar<std::uint64_t>(gs[i]["seed"], source, f + "seed") : cfg.seed + i;
      auto add = cases_from(gs[i], source, f, gseed, true);
      cfg.cases.insert(cfg.cases.end(), add.begin(), add.end());
    }
  } else if (top_group) {
    cfg.cases = cases_from(root, source, "", cfg.seed, cfg.command != "index");
  }

  if (const YAML::Node ix = root["index"]) {
    check_keys(ix, source, "index", {"configuration", "configuration_file", "oracle_samples"});
    if (ix["configuration"] && ix["configuration_file"])
      fail(ix, source, "index", "give either configuration or configuration_file");
    if (ix["configuration"]) cfg.configuration = configuration_from(ix["configuration"], source, cfg.tol);
    if (ix["configuration_file"]) {
      std::filesystem::path p = scalar<std::string>(ix["configuration_file"], source, "index.configuration_file");
      if (p.is_relative()) p = base_dir / p;
      cfg.configuration = load_configuration_file(p, cfg.tol);
    }
    if (ix["oracle_samples"]) cfg.oracle_samples = scalar<int>(ix["oracle_samples"], source, "index.oracle_samples");
    if (cfg.oracle_samples < 0) fail(ix["oracle_samples"], source, "index.oracle_samples", "must be >= 0");
  }

  if (const YAML::Node pl = root["planar"]) {
    check_keys(pl, source, "planar", {"starts", "min_instances", "tau_samples", "two_body"});
    if (pl["starts"]) cfg.starts = scalar<int>(pl["starts"], source, "planar.starts");
    if (cfg.starts < 0) fail(pl["starts"], source, "planar.starts", "must be >= 0");
    if (pl["min_instances"]) cfg.min_instances = scalar<int>(pl["min_instances"], source, "planar.min_instances");
    if (pl["tau_samples"]) cfg.tau_samples = scalar<int>(pl["tau_samples"], source, "planar.tau_samples");
    if (const YAML::Node tb = pl["two_body"]) {
      check_keys(tb, source, "planar.two_body", {"mass", "samples", "delta"});
      cfg.two_body_continuum = true;
      if (tb["mass"]) cfg.two_body_mass = finite(tb["mass"], source, "planar.two_body.mass");
      if (tb["samples"]) cfg.two_body_samples = scalar<int>(tb["samples"], source, "planar.two_body.samples");
      if (tb["delta"]) cfg.two_body_delta = finite(tb["delta"], source, "planar.two_body.delta");
      if (!(cfg.two_body_mass > 0.0)) fail(tb, source, "planar.two_body.mass", "must be positive");
      if (cfg.two_body_samples < 1) fail(tb, source, "planar.two_body.samples", "must be positive");
      if (!(cfg.two_body_delta > 0.0 && cfg.two_body_delta < cfg.two_body_mass))
        fail(tb, source, "planar.two_body.delta", "must lie in (0, mass)");
    }
  }

  if (const YAML::Node dy = root["dynamics"]) {
    check_keys(dy, source, "dynamics", {"T", "dt", "s_values", "residual_samples", "require_all_kinds"});
    if (dy["T"]) cfg.T = finite(dy["T"], source, "dynamics.T");
    if (dy["dt"]) cfg.dt = finite(dy["dt"], source, "dynamics.dt");
    if (dy["s_values"]) cfg.s_values = number_list(dy["s_values"], source, "dynamics.s_values");
    if (dy["residual_samples"])
      cfg.residual_samples = scalar<int>(dy["residual_samples"], source, "dynamics.residual_samples");
    if (dy["require_all_kinds"])
      cfg.require_all_kinds = scalar<bool>(dy["require_all_kinds"], source, "dynamics.require_all_kinds");
    if (!(cfg.T > 0.0 && cfg.dt > 0.0 && cfg.dt <= cfg.T)) fail(dy, source, "dynamics", "need 0 < dt <= T");
    if (cfg.s_values.empty()) fail(dy, source, "dynamics.s_values", "must not be empty");
  }

  if (const YAML::Node cp = root["compactness"]) {
    check_keys(cp, source, "compactness", {"divergence", "exclusion"});
    if (const YAML::Node dv = cp["divergence"]) {
      if (!dv.IsSequence()) fail(dv, source, "compactness.divergence", "expected a list");
      for (std::size_t i = 0; i < dv.size(); ++i) {
        const std::string f = "compactness.divergence[" + std::to_string(i) + "]";
        const YAML::Node e = dv[i];
        check_keys(e, source, f, {"family", "masses", "n", "mass", "theta_hi", "theta_lo", "per_decade", "slope",
                                  "slope_tolerance"});
        DivergenceSpec d;
        if (!e["family"]) fail(e, source, f + ".family", "missing");
        try {
          d.kind = family_kind_from_string(scalar<std::string>(e["family"], source, f + ".family"));
        } catch (const ConfigError& err) {
          fail(e["family"], source, f + ".family", err.what());
        }
        if (e["masses"]) {
          d.masses = masses_from(e["masses"], source, f + ".masses");
        } else if (e["n"]) {
          const int n = scalar<int>(e["n"], source, f + ".n");
          const double m = e["mass"] ? finite(e["mass"], source, f + ".mass") : 1.0;
          if (n < 2 || !(m > 0.0)) fail(e, source, f, "need n >= 2 and a positive mass");
          d.masses = MassList(Eigen::VectorXd::Constant(n, m));
        } else {
          fail(e, source, f, "give masses or n");
        }
        if (e["theta_hi"]) d.theta_hi = finite(e["theta_hi"], source, f + ".theta_hi");
        if (e["theta_lo"]) d.theta_lo = finite(e["theta_lo"], source, f + ".theta_lo");
        if (e["per_decade"]) d.per_decade = scalar<int>(e["per_decade"], source, f + ".per_decade");
        if (e["slope"]) d.slope_target = finite(e["slope"], source, f + ".slope");
        if (e["slope_tolerance"]) d.slope_tolerance = finite(e["slope_tolerance"], source, f + ".slope_tolerance");
        if (!(d.theta_hi > d.theta_lo && d.theta_lo > 0.0) || d.per_decade < 1)
          fail(e, source, f, "need theta_hi > theta_lo > 0 and per_decade >= 1");
        cfg.divergence.push_back(d);
      }
    }
    if (const YAML::Node ex = cp["exclusion"]) {
      if (!ex.IsSequence()) fail(ex, source, "compactness.exclusion", "expected a list");
      for (std::size_t i = 0; i < ex.size(); ++i) {
        const std::string f = "compactness.exclusion[" + std::to_string(i) + "]";
        const YAML::Node e = ex[i];
        check_keys(e, source, f, {"label", "center", "center_file", "radii", "samples", "family", "expect_excluded",
                                  "threshold_factor"});
        ExclusionSpec s;
        s.label = e["label"] ? scalar<std::string>(e["label"], source, f + ".label") : "probe" + std::to_string(i);
        if (bool(e["center"]) == bool(e["center_file"])) fail(e, source, f, "give exactly one of center, center_file");
        if (e["center"]) {
          s.center = configuration_from(e["center"], source, cfg.tol);
        } else {
          std::filesystem::path p = scalar<std::string>(e["center_file"], source, f + ".center_file");
          if (p.is_relative()) p = base_dir / p;
          s.center = load_configuration_file(p, cfg.tol);
        }
        if (e["radii"]) s.radii = number_list(e["radii"], source, f + ".radii");
        for (double r : s.radii)
          if (!(r > 0.0)) fail(e["radii"], source, f + ".radii", "radii must be positive");
        if (e["samples"]) s.samples = scalar<int>(e["samples"], source, f + ".samples");
        if (s.samples < 1) fail(e, source, f + ".samples", "must be positive");
        if (e["family"]) {
          try {
            s.family = family_kind_from_string(scalar<std::string>(e["family"], source, f + ".family"));
          } catch (const ConfigError& err) {
            fail(e["family"], source, f + ".family", err.what());
          }
          if (family_curvature(*s.family) != s.center.curvature)
            fail(e["family"], source, f + ".family", "family curvature differs from the center");
        }
        if (e["expect_excluded"]) s.expect_excluded = scalar<bool>(e["expect_excluded"], source, f + ".expect_excluded");
        if (e["threshold_factor"]) s.threshold_factor = finite(e["threshold_factor"], source, f + ".threshold_factor");
        cfg.exclusion.push_back(s);
      }
    }
  }

  if (needs_cases && cfg.cases.empty() && !cfg.configuration && !cfg.two_body_continuum && cfg.oracle_samples == 0)
    fail(root, source, "sigma/masses", "this command needs at least one problem case");
  if (cfg.command == "compactness" && cfg.divergence.empty() && cfg.exclusion.empty())
    fail(root, source, "compactness", "needs divergence or exclusion entries");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  return parse_experiment_config(read_file(path), path.string(), path.parent_path(), seed_override);
}

}  // namespace curvedcc
