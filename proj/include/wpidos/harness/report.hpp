#pragma once

// Differences between the manifests of two runs.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wpidos/harness/config.hpp"

namespace wpidos::harness {

struct ReportDiff {
  /// Dotted path such as results.slope or checks.slope.
  std::string key;
  std::string a;
  std::string b;
  /// b - a for numeric entries, NaN otherwise.
  double delta = 0.0;
};

/// Entries of results, checks and passed that differ between the two run
/// directories. Throws UsageError if either manifest is missing.
std::vector<ReportDiff> compare_report(const std::filesystem::path& run_a, const std::filesystem::path& run_b);

/// Aligned text table; "no differences" when empty.
void write_report(std::ostream& out, const std::vector<ReportDiff>& diffs);

Json read_manifest(const std::filesystem::path& run_dir);

}  // namespace wpidos::harness
