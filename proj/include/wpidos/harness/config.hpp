#pragma once

// Experiment configuration: a JSON tree of defaults per experiment, merged
// with a user file and dotted key=value overrides. Keys absent from the
// defaults are rejected.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace wpidos::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

std::vector<std::string> experiment_names();

class ExperimentConfig {
 public:
  /// Default tree for a named experiment; throws UsageError if unknown.
  static ExperimentConfig defaults(const std::string& experiment);

  /// Recursively overlays `user`; unknown keys and type changes are rejected.
  void merge(const Json& user);
  /// "a.b.c=value"; value is parsed as JSON when possible, else kept as a string.
  void apply_override(const std::string& assignment);
  void set(const std::string& dotted_key, Json value);

  const Json& at(const std::string& dotted_key) const;
  template <typename T>
  T get(const std::string& dotted_key) const {
    return at(dotted_key).get<T>();
  }

  std::string experiment() const { return get<std::string>("experiment"); }
  std::uint64_t seed() const { return get<std::uint64_t>("seed"); }
  std::filesystem::path out_dir() const;

  const Json& tree() const { return tree_; }

 private:
  Json tree_;
};

/// Defaults for `experiment`, then the file at `path` (if non-empty).
ExperimentConfig load_config(const std::string& experiment, const std::filesystem::path& path);

}  // namespace wpidos::harness
