#pragma once

// Seeded property suites over randomly drawn spectral data. Each sample
// draws from its own generator, derived from (seed, suite, sample index), so
// results do not depend on evaluation order.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsoliton/io/report.hpp"
#include "vsoliton/sampling.hpp"

namespace vsoliton::io {

struct SuiteOptions {
  long samples = 0;
  std::uint64_t seed = 0;
  std::optional<long> n;
  std::optional<long> count;
  std::optional<std::string> boundary;
  std::map<std::string, double> tolerances;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite; throws ConfigError for an unknown name.
ReportDocument run_property_suite(const std::string& name, const SuiteOptions& options);

/// Seed of sample `index` of suite `name`.
std::uint64_t sample_seed(std::uint64_t seed, const std::string& name, long index);

/// Random boundary of the given kind ("robin", "mixed", "rotated_mixed").
BoundarySpecd random_boundary(Sampler& s, const std::string& kind, Eigen::Index n);

}  // namespace vsoliton::io
