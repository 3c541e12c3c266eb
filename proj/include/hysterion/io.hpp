#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hysterion/ensemble.hpp"
#include "hysterion/path.hpp"
#include "hysterion/scaling.hpp"

namespace hyst {

inline constexpr const char* kToolVersion = "hysterion 1.0.0";

// Shortest decimal that parses back to the same bits, so equal data give
// equal text and files stay readable.
std::string fmt_double(double v);

std::string read_text_file(const std::string& path);  // IoError
void write_text_file(const std::string& path, std::string_view content);

// CSV renderers. All floats go through fmt_double, so identical data give
// byte-identical files.
std::string path_csv(const Path& path);
std::string histogram_csv(const Histogram& h);
std::string samples_csv(const std::vector<CycleObservables>& samples);
std::string summary_csv(const EnsembleSummary& s);
std::string sweep_csv(const std::vector<SweepPoint>& points);

nlohmann::json summary_json(const EnsembleSummary& s);
nlohmann::json report_json(const ScalingReport& rep);

std::string sha256_hex(std::string_view data);

struct ManifestEntry {
  std::string path;
  long long bytes = 0;
  std::string sha256;
};

// Record of one CLI invocation: what ran, with which resolved options, and
// which files came out. The digest ignores wall-clock fields so reruns with
// the same inputs can be compared.
struct Manifest {
  std::string tool_version = kToolVersion;
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::string started_utc;
  std::string finished_utc;
  nlohmann::json reports = nlohmann::json::array();
  std::vector<ManifestEntry> outputs;

  void add_output(const std::string& path);  // sizes and hashes the file
  nlohmann::json to_json() const;
  std::string canonical_digest() const;
  void write(const std::string& path) const;
};

// Digest of a manifest document with timing fields stripped.
std::string canonical_manifest_digest(const nlohmann::json& manifest);

std::string utc_now_iso8601();

}  // namespace hyst
