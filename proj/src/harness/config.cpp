#include "wpidos/harness/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "wpidos/errors.hpp"

namespace wpidos::harness {

namespace {

// Numeric leaves of 0 mean "resolve from the symbol and dimension".
Json common_defaults(const std::string& experiment) {
  Json tree;
  tree["experiment"] = experiment;
  tree["symbol"] = "laplacian";
  tree["seed"] = 0;
  tree["out_dir"] = "runs/" + experiment;
  tree["grid"] = {{"d", 1}, {"n", 0}, {"L", 0.0}};
  tree["field"] = {{"kind", "gaussian"}, {"sigma", 0.0}, {"radius", 0.0}, {"kmax", 4}, {"path", ""}};
  return tree;
}

std::vector<std::string> split_key(const std::string& dotted) {
  std::vector<std::string> parts;
  std::stringstream in(dotted);
  std::string part;
  while (std::getline(in, part, '.')) parts.push_back(part);
  if (parts.empty() || std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); }))
    throw UsageError("malformed config key '" + dotted + "'");
  return parts;
}

bool compatible(const Json& existing, const Json& incoming) {
  if (existing.is_number() && incoming.is_number()) return true;
  return existing.type() == incoming.type();
}

void merge_into(Json& base, const Json& user, const std::string& prefix) {
  if (!user.is_object()) throw UsageError("config section '" + prefix + "' must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!base.contains(it.key())) throw UsageError("unknown config key '" + key + "'");
    Json& slot = base[it.key()];
    if (slot.is_object()) {
      merge_into(slot, it.value(), key);
    } else {
      if (!compatible(slot, it.value())) throw UsageError("config key '" + key + "' has the wrong type");
      slot = it.value();
    }
  }
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"validate-symbol", "dos-fit", "wpi-check", "nash", "decay-run", "regimes"};
}

ExperimentConfig ExperimentConfig::defaults(const std::string& experiment) {
  ExperimentConfig cfg;
  Json tree = common_defaults(experiment);
  if (experiment == "validate-symbol") {
    tree["grid"]["d"] = 2;
    tree["validate"] = {{"budget", 10000}};
  } else if (experiment == "dos-fit") {
    tree["field"]["kind"] = "flat-spectrum";
    tree["lambdas"] = {{"lo", 0.0}, {"hi", 0.0}, {"count", 24}};
    tree["checks"] = {{"alpha_tolerance", 0.05}};
  } else if (experiment == "wpi-check") {
    tree["wpi"] = {{"k_count", 99}, {"r", 0.0}};
    tree["checks"] = {{"chain_slack", 0.05}};
  } else if (experiment == "nash") {
    tree["nash"] = {{"fields", 200}, {"kmax", 4}, {"sigmas", {0.5, 1.0, 2.0, 3.0, 4.0}}};
  } else if (experiment == "decay-run") {
    tree["times"] = {{"eta", 0.0}, {"per_decade", 32}, {"lo", 0.0}, {"hi", 0.0}};
    tree["checks"] = {{"slope_tolerance", 0.0}, {"envelope_slack", 0.05}};
  } else if (experiment == "regimes") {
    tree["regimes"] = {{"alpha", 1.0}, {"c1", 1.0},  {"c2", 1.0},       {"var0", 1.0},
                       {"nx_sq", 1.0}, {"betas", {-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0}},
                       {"t_max", 1e6}, {"per_decade", 16}};
    tree["checks"] = {{"exponent_tolerance", 0.05}};
  } else {
    throw UsageError("unknown experiment '" + experiment + "'");
  }
  cfg.tree_ = std::move(tree);
  return cfg;
}

void ExperimentConfig::merge(const Json& user) {
  if (user.contains("experiment") && user["experiment"] != tree_["experiment"])
    throw UsageError("config file names experiment " + user["experiment"].dump() + " but " +
                     tree_["experiment"].dump() + " was requested");
  merge_into(tree_, user, "");
}

void ExperimentConfig::set(const std::string& dotted_key, Json value) {
  Json* node = &tree_;
  for (const std::string& part : split_key(dotted_key)) {
    if (!node->is_object() || !node->contains(part)) throw UsageError("unknown config key '" + dotted_key + "'");
    node = &(*node)[part];
  }
  if (node->is_object()) throw UsageError("config key '" + dotted_key + "' names a section");
  if (!compatible(*node, value)) throw UsageError("config key '" + dotted_key + "' has the wrong type");
  *node = std::move(value);
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  // Symbol names such as fractional:p=0.5 are strings even when they parse.
  if (at(key).is_string() && !value.is_string()) value = text;
  set(key, std::move(value));
}

const Json& ExperimentConfig::at(const std::string& dotted_key) const {
  const Json* node = &tree_;
  for (const std::string& part : split_key(dotted_key)) {
    if (!node->is_object() || !node->contains(part)) throw UsageError("unknown config key '" + dotted_key + "'");
    node = &(*node)[part];
  }
  return *node;
}

std::filesystem::path ExperimentConfig::out_dir() const { return get<std::string>("out_dir"); }

ExperimentConfig load_config(const std::string& experiment, const std::filesystem::path& path) {
  ExperimentConfig cfg = ExperimentConfig::defaults(experiment);
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  const Json user = Json::parse(in, nullptr, false);
  if (user.is_discarded()) throw UsageError("config " + path.string() + " is not valid JSON");
  cfg.merge(user);
  return cfg;
}

}  // namespace wpidos::harness
