#include "halfloop/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace halfloop {

nlohmann::ordered_json model_echo(const ModelFile& mf) {
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  m["origin"] = mf.origin;
  m["kind"] = kind_name(mf.kind);
  for (const auto& [k, v] : mf.entries) {
    if (k == "kind") continue;
    m[k] = v;
  }
  return m;
}

nlohmann::ordered_json to_json(const Report& r, bool timings) {
  nlohmann::ordered_json j;
  j["format_version"] = kReportFormatVersion;
  j["version"] = r.version;
  j["model"] = r.model;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = status_name(c.status);
    e["time_ms"] = timings ? c.time_ms : 0.0;
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  j["status"] = r.passed() ? "pass" : "fail";
  return j;
}

std::string render_json(const Report& r, bool timings) { return to_json(r, timings).dump(2) + "\n"; }

std::string render_text(const Report& r, bool timings) {
  std::ostringstream os;
  os << "halfloop " << r.version;
  if (r.model.contains("origin")) os << "  " << r.model["origin"].get<std::string>();
  if (r.model.contains("kind")) os << "  (" << r.model["kind"].get<std::string>() << ")";
  os << "\n";
  if (r.model.contains("conventions"))
    for (const auto& [k, v] : r.model["conventions"].items()) os << "  convention " << k << ": " << v.get<std::string>() << "\n";
  std::size_t pass = 0, fail = 0, info = 0;
  for (const auto& c : r.checks) {
    const char* tag = c.status == Status::pass ? "PASS" : c.status == Status::fail ? "FAIL" : "INFO";
    (c.status == Status::pass ? pass : c.status == Status::fail ? fail : info)++;
    os << tag << "  " << c.name;
    if (timings) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "  %.1f ms", c.time_ms);
      os << buf;
    }
    os << "\n";
    if (!c.witness.empty()) os << "      witness: " << c.witness << "\n";
    if (!c.note.empty()) os << "      note: " << c.note << "\n";
  }
  os << "status: " << (r.passed() ? "pass" : "fail") << " (" << pass << " pass, " << fail << " fail, " << info
     << " info)\n";
  return os.str();
}

Report report_from_json(const nlohmann::ordered_json& j) {
  if (j.at("format_version").get<int>() != kReportFormatVersion) throw std::runtime_error("unsupported report format");
  Report r;
  r.version = j.at("version").get<std::string>();
  r.model = j.at("model");
  for (const auto& e : j.at("checks")) {
    Check c;
    c.name = e.at("name").get<std::string>();
    const std::string s = e.at("status").get<std::string>();
    if (s == "pass") {
      c.status = Status::pass;
    } else if (s == "fail") {
      c.status = Status::fail;
    } else if (s == "info") {
      c.status = Status::info;
    } else {
      throw std::runtime_error("unknown status '" + s + "'");
    }
    c.time_ms = e.at("time_ms").get<double>();
    if (e.contains("witness")) c.witness = e["witness"].get<std::string>();
    r.checks.push_back(std::move(c));
  }
  if (j.at("status").get<std::string>() != (r.passed() ? "pass" : "fail"))
    throw std::runtime_error("report status disagrees with its checks");
  return r;
}

}  // namespace halfloop
