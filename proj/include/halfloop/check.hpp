#pragma once

#include <chrono>
#include <string>
#include <type_traits>
#include <vector>

namespace halfloop {

/// info records a finding that is reported but does not gate the exit status.
enum class Status { pass, fail, info };

struct Check {
  std::string name;
  Status status = Status::pass;
  std::string witness;  // first offending object on failure
  std::string note;
  double time_ms = 0;
};

inline Check make_check(std::string name, bool ok, std::string witness = {}, std::string note = {}) {
  return Check{std::move(name), ok ? Status::pass : Status::fail, ok ? std::string() : std::move(witness),
               std::move(note), 0};
}

inline const char* status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::info: return "info";
  }
  return "?";
}

inline bool all_passed(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (c.status == Status::fail) return false;
  return true;
}

/// Runs f (returning a Check or a vector of them) and appends the results with wall time;
/// a group shares its time evenly.
template <class F>
void append_timed(std::vector<Check>& out, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = f();
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if constexpr (std::is_same_v<decltype(r), Check>) {
    r.time_ms = ms;
    out.push_back(std::move(r));
  } else {
    for (auto& c : r) {
      c.time_ms = ms / static_cast<double>(r.size());
      out.push_back(std::move(c));
    }
  }
}

}  // namespace halfloop
