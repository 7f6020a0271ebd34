#pragma once

// Verification reports: {format_version, version, model, checks:[{name, status, time_ms,
// witness?}], status}. Deterministic unless timings are requested.

#include <string>
#include <vector>

#include "halfloop/check.hpp"
#include "halfloop/model.hpp"
#include "json.hpp"

namespace halfloop {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

struct Report {
  std::string version = kToolVersion;
  nlohmann::ordered_json model = nlohmann::ordered_json::object();
  std::vector<Check> checks;

  bool passed() const { return all_passed(checks); }
};

nlohmann::ordered_json model_echo(const ModelFile& mf);

/// time_ms is written as 0 unless timings is set, so reports compare byte for byte.
nlohmann::ordered_json to_json(const Report& r, bool timings = false);
std::string render_json(const Report& r, bool timings = false);
std::string render_text(const Report& r, bool timings = false);
/// Inverse of to_json; notes are not serialized and come back empty.
Report report_from_json(const nlohmann::ordered_json& j);

}  // namespace halfloop
