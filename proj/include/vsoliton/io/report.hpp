#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vsoliton/io/config.hpp"

namespace vsoliton::io {

inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Recorded };

const char* to_string(CheckStatus status);

struct Check {
  std::string name;
  double residual = 0;
  double tolerance = 0;  // 0 for recorded-only values
  CheckStatus status = CheckStatus::Recorded;
  double seconds = 0;
};

/// Pass iff residual <= tolerance; NaN fails.
Check make_check(std::string name, double residual, double tolerance);
Check recorded(std::string name, double value);

struct ReportDocument {
  std::string mode;
  std::vector<Check> checks;
  Json results = Json::object();
  std::size_t resamples = 0;
  Json config = Json::object();

  void add(Check c) { checks.push_back(std::move(c)); }
  void merge(ReportDocument other);
  std::size_t failures() const;
  bool passed() const { return failures() == 0; }

  /// Serialized report. Per-check timing is included only if requested, so
  /// that repeated runs stay byte-identical by default.
  Json to_json(bool with_timing) const;
};

/// Digest of the tool version, build environment and echoed config.
std::string environment_digest(const Json& config);

/// Tolerance lookup: per-check name, then class name, then the default.
double tolerance(const std::map<std::string, double>& overrides, const std::string& name, const std::string& cls);

/// Default tolerance of a tolerance class ("algebraic", "involution",
/// "unitarity", "mirror_constraint", "asymptotic", "position", "order").
double default_tolerance(const std::string& cls);

}  // namespace vsoliton::io
