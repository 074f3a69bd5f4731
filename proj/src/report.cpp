#include "vsoliton/io/report.hpp"

#include <cmath>

#include <Eigen/Core>
#include <fmt/core.h>

namespace vsoliton::io {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Recorded: return "recorded";
  }
  return "unknown";
}

Check make_check(std::string name, double residual, double tolerance) {
  const bool ok = std::isfinite(residual) && residual <= tolerance;
  return {std::move(name), residual, tolerance, ok ? CheckStatus::Pass : CheckStatus::Fail, 0.0};
}

Check recorded(std::string name, double value) { return {std::move(name), value, 0.0, CheckStatus::Recorded, 0.0}; }

void ReportDocument::merge(ReportDocument other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
  resamples += other.resamples;
  for (auto it = other.results.begin(); it != other.results.end(); ++it) results[it.key()] = std::move(it.value());
}

std::size_t ReportDocument::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::Fail;
  return n;
}

namespace {

// JSON has no NaN/inf; those are written as strings.
Json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

Json ReportDocument::to_json(bool with_timing) const {
  Json list = Json::array();
  double total = 0;
  for (const auto& c : checks) {
    Json e{{"name", c.name}, {"residual", number_or_string(c.residual)}, {"status", io::to_string(c.status)}};
    if (c.status != CheckStatus::Recorded) e["tolerance"] = c.tolerance;
    if (with_timing) e["seconds"] = c.seconds;
    total += c.seconds;
    list.push_back(std::move(e));
  }
  std::size_t pass = 0;
  std::size_t rec = 0;
  for (const auto& c : checks) {
    pass += c.status == CheckStatus::Pass;
    rec += c.status == CheckStatus::Recorded;
  }
  Json doc{{"tool", "vsoliton"},
           {"version", kToolVersion},
           {"mode", mode},
           {"environment", {{"digest", environment_digest(config)}, {"scalar", "double"}}},
           {"config", config},
           {"checks", list},
           {"summary", {{"checks", checks.size()}, {"passed", pass}, {"failed", failures()}, {"recorded", rec},
                        {"resamples", resamples}}},
           {"results", results}};
  if (with_timing) doc["timing"] = {{"total_seconds", total}};
  return doc;
}

std::string environment_digest(const Json& config) {
  const std::string build = fmt::format("vsoliton {} | {} {}.{}.{} | eigen {}.{}.{} | C++ {}", kToolVersion,
#if defined(__clang__)
                                        "clang", __clang_major__, __clang_minor__, __clang_patchlevel__,
#elif defined(__GNUC__)
                                        "gcc", __GNUC__, __GNUC_MINOR__, __GNUC_PATCHLEVEL__,
#else
                                        "unknown", 0, 0, 0,
#endif
                                        EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION, __cplusplus);
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : build + "\n" + config.dump()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

double default_tolerance(const std::string& cls) {
  static const std::map<std::string, double> defaults{{"algebraic", 1e-10}, {"involution", 1e-12},
                                                      {"unitarity", 1e-12}, {"mirror_constraint", 1e-8},
                                                      {"asymptotic", 1e-4}, {"position", 1e-3},
                                                      {"order", 0.3}};
  auto it = defaults.find(cls);
  if (it == defaults.end()) throw std::logic_error("unknown tolerance class " + cls);
  return it->second;
}

double tolerance(const std::map<std::string, double>& overrides, const std::string& name, const std::string& cls) {
  if (auto it = overrides.find(name); it != overrides.end()) return it->second;
  if (auto it = overrides.find(cls); it != overrides.end()) return it->second;
  return default_tolerance(cls);
}

}  // namespace vsoliton::io
