#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vsoliton/io/config.hpp"
#include "vsoliton/io/report.hpp"

namespace vsoliton::io {

struct RunOptions {
  std::optional<std::filesystem::path> out;  // overrides "output"
  std::optional<std::uint64_t> seed;         // overrides suite.seed
  std::optional<long> samples;               // overrides suite.samples
  bool timing = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunResult {
  ReportDocument report;
  std::filesystem::path dir;
  std::vector<std::string> files;  // written, relative to dir
};

/// Runs the configured mode and writes report.json, manifest.json and the
/// mode's artifacts. Throws ConfigError, Error or IoError on invalid input.
RunResult execute(RunConfig config, const RunOptions& options);

/// execute() with the exit-code contract: 0 all checks pass, 1 invalid
/// input or I/O failure, 2 a check failed. Messages go to `err`, the
/// summary to `out`.
int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Loads the configuration file first; a load failure also exits 1.
int run_file(const std::string& mode, const std::filesystem::path& config, const RunOptions& options,
             std::ostream& out, std::ostream& err);

}  // namespace vsoliton::io
