#include "wpidos/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "wpidos/errors.hpp"

namespace wpidos::harness {

namespace {

void flatten(const Json& node, const std::string& prefix, std::map<std::string, Json>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out[prefix] = node;
  }
}

std::map<std::string, Json> comparable(const Json& manifest) {
  std::map<std::string, Json> out;
  for (const char* section : {"results", "checks", "passed", "error"})
    if (manifest.contains(section)) flatten(manifest[section], section, out);
  return out;
}

std::string text(const Json* value) {
  if (!value) return "-";
  if (value->is_string()) return value->get<std::string>();
  if (value->is_number_float()) {
    std::ostringstream s;
    s << std::setprecision(10) << value->get<double>();
    return s.str();
  }
  return value->dump();
}

}  // namespace

Json read_manifest(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw UsageError("missing manifest: " + path.string());
  Json manifest = Json::parse(in, nullptr, false);
  if (manifest.is_discarded()) throw UsageError("manifest is not valid JSON: " + path.string());
  return manifest;
}

std::vector<ReportDiff> compare_report(const std::filesystem::path& run_a, const std::filesystem::path& run_b) {
  const auto a = comparable(read_manifest(run_a));
  const auto b = comparable(read_manifest(run_b));
  std::map<std::string, std::pair<const Json*, const Json*>> keys;
  for (const auto& [k, v] : a) keys[k].first = &v;
  for (const auto& [k, v] : b) keys[k].second = &v;
  std::vector<ReportDiff> diffs;
  for (const auto& [key, pair] : keys) {
    const auto [va, vb] = pair;
    if (va && vb && *va == *vb) continue;
    ReportDiff diff{key, text(va), text(vb), std::numeric_limits<double>::quiet_NaN()};
    if (va && vb && va->is_number() && vb->is_number()) diff.delta = vb->get<double>() - va->get<double>();
    diffs.push_back(diff);
  }
  return diffs;
}

void write_report(std::ostream& out, const std::vector<ReportDiff>& diffs) {
  if (diffs.empty()) {
    out << "no differences\n";
    return;
  }
  std::size_t width = 3;
  for (const ReportDiff& d : diffs) width = std::max(width, d.key.size());
  out << std::left << std::setw(static_cast<int>(width)) << "key" << "  " << std::setw(20) << "run_a" << "  "
      << std::setw(20) << "run_b" << "  delta\n";
  for (const ReportDiff& d : diffs) {
    out << std::left << std::setw(static_cast<int>(width)) << d.key << "  " << std::setw(20) << d.a << "  "
        << std::setw(20) << d.b << "  ";
    if (std::isnan(d.delta))
      out << "-";
    else
      out << std::setprecision(6) << d.delta;
    out << '\n';
  }
}

}  // namespace wpidos::harness
