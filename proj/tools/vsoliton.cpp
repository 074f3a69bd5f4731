#include <iostream>

#include <CLI11.hpp>

#include "vsoliton/io/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Vector soliton workbench: dressing, collisions, boundary reflections and property suites"};
  app.set_version_flag("--version", std::string(vsoliton::io::kToolVersion));

  std::string mode;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  long samples = 0;
  bool timing = false;
  app.add_option("mode", mode, "simulate, collide, reflect, mirror, verify or transfer")
      ->required()
      ->check(CLI::IsMember({"simulate", "collide", "reflect", "mirror", "verify", "transfer"}));
  app.add_option("--config", config, "JSON configuration file")->required();
  auto* out_opt = app.add_option("--out", out, "output directory (overrides \"output\")");
  auto* seed_opt = app.add_option("--seed", seed, "suite seed (verify)");
  auto* samples_opt = app.add_option("--samples", samples, "suite sample count (verify)")->check(CLI::NonNegativeNumber);
  app.add_flag("--timing", timing, "include per-check timing in report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vsoliton::io::kExitInvalid;
  }

  vsoliton::io::RunOptions options;
  if (*out_opt) options.out = out;
  if (*seed_opt) options.seed = seed;
  if (*samples_opt) options.samples = samples;
  options.timing = timing;
  return vsoliton::io::run_file(mode, config, options, std::cout, std::cerr);
}
