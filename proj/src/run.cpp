#include "vsoliton/io/run.hpp"

#include <chrono>
#include <ostream>

#include <fmt/core.h>

#include "vsoliton/asymptotics.hpp"
#include "vsoliton/io/export.hpp"
#include "vsoliton/io/suites.hpp"
#include "vsoliton/verification.hpp"

namespace vsoliton::io {

namespace {

Json vector_json(const CVectord& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v[i]));
  return out;
}

std::string pair_label(const std::string& name, std::size_t a, std::size_t b) {
  return fmt::format("{}[{},{}]", name, a + 1, b + 1);
}

FieldGridd grid_of(const std::function<CVectord(double, double)>& field, Eigen::Index n, const GridConfig& g) {
  return sample_grid<double>(field, n, g.x0, g.x1, g.t0, g.t1, g.nx, g.nt);
}

struct Context {
  const RunConfig& config;
  ReportDocument& report;
  std::vector<std::string>& files;
  std::filesystem::path dir;
  std::optional<std::uint64_t> digest;

  double tol(const std::string& name, const std::string& cls) const { return tolerance(config.tolerances, name, cls); }
  void check(const std::string& label, const std::string& name, double residual, const std::string& cls) {
    report.add(make_check(label, residual, tol(name, cls)));
  }
  void write_grid(const FieldGridd& g) {
    export_grid(g, dir);
    files.push_back("grid.csv");
  }
};

void simulate(Context& c) {
  const auto& data = *c.config.data;
  auto g = grid_of([&](double x, double t) { return reconstruct_field<double>(data, x, t); }, data.n(), *c.config.grid);
  g.digest = data_digest(data);
  c.write_grid(g);
  if (data.size() == 1) {
    double worst = 0;
    for (Eigen::Index it = 0; it < g.nt; ++it)
      for (Eigen::Index ix = 0; ix < g.nx; ++ix)
        worst = std::max(worst, max_abs(CVectord(g.at(ix, it) - one_soliton_field<double>(data.point(0), data[0].beta,
                                                                                          g.x(ix), g.t(it)))));
    c.check("one-soliton", "one-soliton", worst, "unitarity");
  }
  c.report.add(recorded("pde-residual", pde_residual(g)));
  c.report.results["grid"] = {{"nx", g.nx}, {"nt", g.nt}, {"hx", g.hx()}, {"ht", g.ht()}};
}

void collide(Context& c) {
  const auto ctx = CollisionContextd::from_unsorted(*c.config.data);
  const auto& data = ctx.data;
  const std::size_t count = data.size();
  Json solitons = Json::array();
  std::vector<Json> by_input(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto bi = beta_in<double>(j, data);
    const auto bo = beta_out<double>(j, data);
    by_input[ctx.original[j]] = {{"index", ctx.original[j] + 1},
                                 {"u", data.point(j).u()},
                                 {"v", data.point(j).v()},
                                 {"beta_in", vector_json(bi.vector())},
                                 {"beta_out", vector_json(bo.vector())},
                                 {"polarization_in", vector_json(polarization_of(bi).vector())},
                                 {"polarization_out", vector_json(polarization_of(bo).vector())},
                                 {"position_shift_in", bi.position_shift(data.point(j))},
                                 {"position_shift_out", bo.position_shift(data.point(j))}};
  }
  for (auto& s : by_input) solitons.push_back(std::move(s));
  c.report.results["solitons"] = solitons;

  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t l = j + 1; l < count; ++l) {
      std::vector<std::size_t> rest;
      for (std::size_t q = 0; q < count; ++q)
        if (q != j && q != l) rest.push_back(q);
      const double r = std::max(collision_consistency_residual<double>(j, l, {}, data),
                                collision_consistency_residual<double>(j, l, rest, data));
      c.check(pair_label("collision", ctx.original[j], ctx.original[l]), "collision", r, "algebraic");
    }
  if (count >= 2) {
    c.check("factorization-pipeline", "factorization-pipeline", factorization_residual(data), "algebraic");
    double separation = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j)
      for (std::size_t l = j + 1; l < count; ++l)
        separation = std::min(separation, std::min(data.point(j).v(), data.point(l).v()) *
                                              std::abs(data.point(j).velocity() - data.point(l).velocity()));
    const double t = 18.0 / separation + 1.0;
    c.report.results["extraction_time"] = t;
    for (std::size_t j = 0; j < count; ++j) {
      const auto in = extract_asymptotic_polarization<double>(data, j, -t);
      const auto out = extract_asymptotic_polarization<double>(data, j, t);
      const double r = std::max(projective_distance(in.polarization, polarization_of(beta_in<double>(j, data))),
                                projective_distance(out.polarization, polarization_of(beta_out<double>(j, data))));
      c.check(fmt::format("asymptotic[{}]", ctx.original[j] + 1), "asymptotic", r, "asymptotic");
    }
  }
  if (c.config.grid) {
    auto g = grid_of([&](double x, double t) { return reconstruct_field<double>(data, x, t); }, data.n(), *c.config.grid);
    g.digest = *c.digest;
    c.write_grid(g);
  }
}

void reflect(Context& c) {
  const auto& data = *c.config.data;
  const auto& spec = *c.config.boundary;
  Json out = Json::array();
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto p = polarization_of(data[j].beta);
    const auto r = reflection_map<double>(data.k(j), p, spec);
    out.push_back({{"index", j + 1},
                   {"k", complex_to_json(data.k(j))},
                   {"polarization", vector_json(p.vector())},
                   {"reflected_k", complex_to_json(r.k)},
                   {"reflected_polarization", vector_json(r.p.vector())}});
    c.check(fmt::format("involution[{}]", j + 1), "involution", involution_residual<double>(data.k(j), p, spec),
            "involution");
  }
  c.report.results["reflections"] = out;
  for (std::size_t j = 0; j < data.size(); ++j)
    for (std::size_t l = j + 1; l < data.size(); ++l)
      c.check(pair_label("reflection-equation", j, l), "reflection-equation",
              reflection_equation_residual<double>(data.k(j), data.k(l), polarization_of(data[j].beta),
                                                   polarization_of(data[l].beta), spec),
              "algebraic");
}

void mirror(Context& c) {
  const auto hl = solve_mirror_norming(*c.config.data, *c.config.boundary);
  c.digest = data_digest(hl.combined);
  write_json(c.dir / "halfline.json", halfline_to_json(hl));
  c.files.push_back("halfline.json");
  c.check("mirror-constraint", "mirror-constraint", mirror_constraint_residual(hl), "mirror_constraint");
  c.check("mirror-polarization", "mirror-polarization", mirror_polarization_residual(hl), "algebraic");
  c.check("reflection-consistency", "reflection-consistency", reflection_consistency_residual(hl), "algebraic");
  const std::vector<double> times{-0.5, 0.0, 0.5};
  c.report.add(recorded("boundary-residual", boundary_residual<double>(hl, times, 1e-3)));

  Json out = Json::array();
  for (std::size_t j = 0; j < hl.size(); ++j) {
    const auto bi = halfline_beta_in<double>(j, hl);
    const auto bo = halfline_beta_out<double>(j, hl);
    out.push_back({{"index", j + 1},
                   {"mirror_k", complex_to_json(hl.mirror_data.k(j))},
                   {"mirror_beta", vector_json(hl.mirror_data.beta(j))},
                   {"polarization_in", vector_json(polarization_of(bi).vector())},
                   {"polarization_out", vector_json(polarization_of(bo).vector())}});
  }
  c.report.results["mirror"] = out;

  if (c.config.grid) {
    if (c.config.grid->x0 < 0) throw ConfigError("/grid/x0", "half-line grids need x0 >= 0");
    auto g = grid_of([&](double x, double t) { return halfline_field<double>(hl, x, t); }, hl.n(), *c.config.grid);
    g.digest = *c.digest;
    c.write_grid(g);
  }
}

void transfer(Context& c) {
  const auto& data = *c.config.data;
  if (data.size() < 2) throw ConfigError("/solitons", "transfer maps need at least two solitons");
  MapState<double> state;
  for (std::size_t j = 0; j < data.size(); ++j) state.emplace_back(polarization_of(data[j].beta), data.k(j));
  const TransferMaps<double> plain;
  for (std::size_t j = 0; j < data.size(); ++j)
    for (std::size_t l = j + 1; l < data.size(); ++l)
      c.check(pair_label("transfer", j, l), "transfer", transfer_commutator_residual<double>(j, l, plain, state),
              "unitarity");
  if (c.config.boundary) {
    TransferMaps<double> reflecting;
    const auto spec = *c.config.boundary;
    reflecting.b_plus = [spec](std::size_t j) { return reflection_site<double>(j, spec); };
    reflecting.b_minus = reflecting.b_plus;
    for (std::size_t j = 0; j < data.size(); ++j)
      for (std::size_t l = j + 1; l < data.size(); ++l)
        c.report.add(recorded(pair_label("transfer-vnls-reflection", j, l),
                              transfer_commutator_residual<double>(j, l, reflecting, state)));
  }
  Json images = Json::array();
  for (std::size_t j = 0; j < data.size(); ++j) {
    Json row = Json::array();
    for (const auto& p : transfer_map<double>(j, plain, state)) row.push_back(vector_json(p.p.vector()));
    images.push_back(row);
  }
  c.report.results["transfer_images"] = images;
}

void verify(Context& c, RunConfig& config) {
  const auto& suite = *config.suite;
  if (suite.samples > 0 && !suite.seed) throw ConfigError("/suite/seed", "a seed is required when samples > 0");
  std::vector<std::string> names;
  for (const auto& name : suite.names) {
    if (name == "all") {
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    } else {
      names.push_back(name);
    }
  }
  SuiteOptions opts{suite.samples, suite.seed.value_or(0), suite.n, suite.count, suite.boundary, config.tolerances};
  for (const auto& [k, v] : suite.tolerances) opts.tolerances[k] = v;
  // validate every name before running anything
  for (const auto& name : names)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      (void)run_property_suite(name, SuiteOptions{});
  for (const auto& name : names) c.report.merge(run_property_suite(name, opts));
}

}  // namespace

RunResult execute(RunConfig config, const RunOptions& options) {
  if (options.out) config.output = *options.out;
  if (config.mode == Mode::Verify) {
    if (options.seed) {
      config.suite->seed = *options.seed;
      config.echo["suite"]["seed"] = *options.seed;
    }
    if (options.samples) {
      if (*options.samples < 0) throw ConfigError("--samples", "must be non-negative");
      config.suite->samples = *options.samples;
      config.echo["suite"]["samples"] = *options.samples;
    }
  }

  RunResult result;
  result.dir = config.output;
  std::error_code ec;
  std::filesystem::create_directories(result.dir, ec);
  if (ec) throw IoError("cannot create directory " + result.dir.string() + ": " + ec.message());

  result.report.mode = to_string(config.mode);
  result.report.config = config.echo;
  Context c{config, result.report, result.files, result.dir, std::nullopt};
  if (config.data) c.digest = data_digest(*config.data);

  const auto start = std::chrono::steady_clock::now();
  switch (config.mode) {
    case Mode::Simulate: simulate(c); break;
    case Mode::Collide: collide(c); break;
    case Mode::Reflect: reflect(c); break;
    case Mode::Mirror: mirror(c); break;
    case Mode::Transfer: transfer(c); break;
    case Mode::Verify: verify(c, config); break;
  }
  if (config.mode != Mode::Verify) {
    // checks of the data modes are timed as a whole
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& ch : result.report.checks) ch.seconds = seconds / double(result.report.checks.size());
  }

  write_json(result.dir / "report.json", result.report.to_json(options.timing));
  result.files.insert(result.files.begin(), "report.json");
  result.files.push_back("manifest.json");
  write_json(result.dir / "manifest.json", make_manifest(result.report.mode, config.echo, c.digest, result.files));
  return result;
}

int run(const RunConfig& config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto result = execute(config, options);
    const auto& r = result.report;
    for (const auto& ch : r.checks)
      if (ch.status == CheckStatus::Fail)
        out << fmt::format("FAIL {} residual={:.3e} tolerance={:.3e}\n", ch.name, ch.residual, ch.tolerance);
    std::size_t rec = 0;
    for (const auto& ch : r.checks) rec += ch.status == CheckStatus::Recorded;
    out << fmt::format("{}: {} checks, {} failed, {} recorded, {} resamples; report in {}\n", r.mode, r.checks.size(),
                       r.failures(), rec, r.resamples, (result.dir / "report.json").string());
    return r.passed() ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitInvalid;
}

int run_file(const std::string& mode, const std::filesystem::path& config, const RunOptions& options,
             std::ostream& out, std::ostream& err) {
  const auto m = parse_mode(mode);
  if (!m) {
    err << "error: unknown mode '" << mode << "'\n";
    return kExitInvalid;
  }
  try {
    return run(load_config(config, *m), options, out, err);
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
  }
  return kExitInvalid;
}

}  // namespace vsoliton::io
