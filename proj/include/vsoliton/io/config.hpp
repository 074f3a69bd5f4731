#pragma once

// Run configuration documents (JSON). Every schema error names the JSON
// pointer of the offending value.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsoliton/soliton_data.hpp"

namespace vsoliton::io {

using Json = nlohmann::json;

enum class Mode { Simulate, Collide, Reflect, Mirror, Verify, Transfer };

const char* to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string& name);

/// Malformed or inconsistent configuration; `pointer` locates the value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct GridConfig {
  double x0 = -10, x1 = 10, t0 = 0, t1 = 1;
  long nx = 201, nt = 11;
};

struct SuiteConfig {
  std::vector<std::string> names;
  long samples = 0;
  std::optional<std::uint64_t> seed;
  std::optional<long> n;      // field components
  std::optional<long> count;  // solitons per sample ("N")
  std::optional<std::string> boundary;
  std::map<std::string, double> tolerances;
};

struct RunConfig {
  Mode mode = Mode::Simulate;
  std::optional<SolitonDatad> data;
  std::optional<BoundarySpecd> boundary;
  std::optional<GridConfig> grid;
  std::optional<SuiteConfig> suite;
  std::map<std::string, double> tolerances;  // top-level overrides
  std::filesystem::path output = "out";
  Json echo;  // the document as read
};

/// Parses a configuration document for the given mode. A "mode" key in the
/// document, if present, must agree.
RunConfig parse_config(const Json& doc, Mode mode);

/// Reads and parses a file; parse errors report the byte offset.
RunConfig load_config(const std::filesystem::path& path, Mode mode);

SolitonDatad parse_solitons(const Json& doc, const std::string& pointer);
BoundarySpecd parse_boundary(const Json& node, long n, const std::string& pointer);

Json to_json(const SolitonDatad& data);
Json to_json(const BoundarySpecd& spec);
Json complex_to_json(Complexd z);

}  // namespace vsoliton::io
