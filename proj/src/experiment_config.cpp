#include "slr/experiment.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace slr {
namespace {

template <typename T>
T get(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ParseError(fmt::format("experiment spec: bad value for '{}' (line {})", key, e.mark.line + 1));
  }
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const char* where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ParseError(fmt::format("experiment spec: unknown key '{}' in {} (line {})", key, where, kv.first.Mark().line + 1));
  }
}

FixedParams parse_fixed(const YAML::Node& node, const std::filesystem::path& base_dir) {
  FixedParams p;
  if (!node) return p;
  if (!node.IsMap()) throw ParseError("experiment spec: 'fixed' must be a mapping");
  check_keys(node, {"m", "n", "t", "snr_db", "p_e", "s", "rho", "max_components", "gap_threshold", "points",
                    "sigma2", "model"},
             "fixed");
  p.m = get<Index>(node, "m", p.m);
  p.n = get<Index>(node, "n", p.n);
  p.t = get<Index>(node, "t", p.t);
  p.snr_db = get<double>(node, "snr_db", p.snr_db);
  p.p_e = get<double>(node, "p_e", p.p_e);
  p.s = get<double>(node, "s", p.s);
  p.rho = get<double>(node, "rho", p.rho);
  p.gap_threshold = get<double>(node, "gap_threshold", p.gap_threshold);
  p.points = get<Index>(node, "points", p.points);
  p.sigma2 = get<double>(node, "sigma2", p.sigma2);
  if (const auto k = node["max_components"]) {
    if (k.as<std::string>() == "all")
      p.max_components.reset();
    else
      p.max_components = get<Index>(node, "max_components", 0);
  }
  p.model = get<std::string>(node, "model", p.model);
  if (p.model != "synthetic" && !base_dir.empty() && std::filesystem::path(p.model).is_relative())
    p.model = (base_dir / p.model).string();
  return p;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ParseError(fmt::format("experiment spec: {} (line {})", e.msg, e.mark.line + 1));
  }
  if (!root.IsMap()) throw ParseError("experiment spec: top level must be a mapping");
  check_keys(root, {"id", "kind", "sweep", "trials", "seed", "methods", "fixed"}, "top level");

  ExperimentSpec spec;
  if (!root["kind"]) throw ParseError("experiment spec: missing 'kind'");
  spec.kind = parse_experiment_kind(get<std::string>(root, "kind", ""));
  spec.id = get<std::string>(root, "id", std::string(to_string(spec.kind)));
  if (spec.id.find(',') != std::string::npos) throw ParseError("experiment spec: id must not contain commas");
  spec.sweep = get<std::vector<double>>(root, "sweep", {});
  spec.trials = get<int>(root, "trials", spec.trials);
  spec.seed = get<std::uint64_t>(root, "seed", spec.seed);
  if (const auto methods = root["methods"]) {
    spec.methods.clear();
    for (const auto& m : methods) spec.methods.push_back(parse_method(m.as<std::string>()));
  } else if (spec.kind == ExperimentKind::Registration) {
    spec.methods = {Method::Spectral, Method::Oracle};
  }
  spec.fixed = parse_fixed(root["fixed"], base_dir);
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open experiment spec '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_spec(buf.str(), path.parent_path());
}

}  // namespace slr
