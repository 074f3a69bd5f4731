#include "vsoliton/io/config.hpp"

#include <fstream>
#include <sstream>

namespace vsoliton::io {

namespace {

std::string child(const std::string& pointer, const std::string& key) { return pointer + "/" + key; }
std::string child(const std::string& pointer, std::size_t index) { return pointer + "/" + std::to_string(index); }

const Json& require(const Json& obj, const std::string& key, const std::string& pointer) {
  if (!obj.is_object()) throw ConfigError(pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(pointer, key), "missing required field");
  return *it;
}

double number(const Json& v, const std::string& pointer) {
  if (!v.is_number()) throw ConfigError(pointer, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(pointer, "expected a finite number");
  return x;
}

long integer(const Json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return v.get<long>();
}

Complexd complex_value(const Json& v, const std::string& pointer) {
  if (v.is_number()) return {number(v, pointer), 0.0};
  if (!v.is_array() || v.size() != 2) throw ConfigError(pointer, "expected a complex number [re, im]");
  return {number(v[0], child(pointer, 0)), number(v[1], child(pointer, 1))};
}

CVectord complex_vector(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw ConfigError(pointer, "expected an array of complex numbers");
  CVectord out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = complex_value(v[i], child(pointer, i));
  return out;
}

std::map<std::string, double> tolerance_map(const Json& v, const std::string& pointer) {
  if (!v.is_object()) throw ConfigError(pointer, "expected an object of named tolerances");
  std::map<std::string, double> out;
  for (auto it = v.begin(); it != v.end(); ++it) {
    const double tol = number(it.value(), child(pointer, it.key()));
    if (!(tol > 0)) throw ConfigError(child(pointer, it.key()), "tolerance must be positive");
    out[it.key()] = tol;
  }
  return out;
}

GridConfig parse_grid(const Json& g, const std::string& pointer) {
  GridConfig c;
  c.x0 = number(require(g, "x0", pointer), child(pointer, "x0"));
  c.x1 = number(require(g, "x1", pointer), child(pointer, "x1"));
  c.t0 = number(require(g, "t0", pointer), child(pointer, "t0"));
  c.t1 = number(require(g, "t1", pointer), child(pointer, "t1"));
  c.nx = integer(require(g, "nx", pointer), child(pointer, "nx"));
  c.nt = integer(require(g, "nt", pointer), child(pointer, "nt"));
  if (c.nx < 5) throw ConfigError(child(pointer, "nx"), "need at least 5 samples");
  if (c.nt < 5) throw ConfigError(child(pointer, "nt"), "need at least 5 samples");
  if (!(c.x1 > c.x0)) throw ConfigError(child(pointer, "x1"), "must exceed x0");
  if (!(c.t1 > c.t0)) throw ConfigError(child(pointer, "t1"), "must exceed t0");
  return c;
}

SuiteConfig parse_suite(const Json& s, const std::string& pointer) {
  SuiteConfig c;
  const Json& name = require(s, "name", pointer);
  if (name.is_string()) {
    c.names.push_back(name.get<std::string>());
  } else if (name.is_array() && !name.empty()) {
    for (std::size_t i = 0; i < name.size(); ++i) {
      if (!name[i].is_string()) throw ConfigError(child(child(pointer, "name"), i), "expected a suite name");
      c.names.push_back(name[i].get<std::string>());
    }
  } else {
    throw ConfigError(child(pointer, "name"), "expected a suite name or a non-empty list of names");
  }
  if (s.contains("samples")) {
    c.samples = integer(s["samples"], child(pointer, "samples"));
    if (c.samples < 0) throw ConfigError(child(pointer, "samples"), "must be non-negative");
  }
  if (s.contains("seed")) {
    if (!s["seed"].is_number_unsigned()) throw ConfigError(child(pointer, "seed"), "expected a non-negative integer");
    c.seed = s["seed"].get<std::uint64_t>();
  }
  if (s.contains("n")) {
    c.n = integer(s["n"], child(pointer, "n"));
    if (*c.n < 1) throw ConfigError(child(pointer, "n"), "must be positive");
  }
  if (s.contains("N")) {
    c.count = integer(s["N"], child(pointer, "N"));
    if (*c.count < 1) throw ConfigError(child(pointer, "N"), "must be positive");
  }
  if (s.contains("boundary")) {
    if (!s["boundary"].is_string()) throw ConfigError(child(pointer, "boundary"), "expected robin, mixed or rotated_mixed");
    c.boundary = s["boundary"].get<std::string>();
    if (*c.boundary != "robin" && *c.boundary != "mixed" && *c.boundary != "rotated_mixed")
      throw ConfigError(child(pointer, "boundary"), "unknown boundary kind '" + *c.boundary + "'");
  }
  if (s.contains("tolerances")) c.tolerances = tolerance_map(s["tolerances"], child(pointer, "tolerances"));
  return c;
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Simulate: return "simulate";
    case Mode::Collide: return "collide";
    case Mode::Reflect: return "reflect";
    case Mode::Mirror: return "mirror";
    case Mode::Verify: return "verify";
    case Mode::Transfer: return "transfer";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string& name) {
  for (Mode m : {Mode::Simulate, Mode::Collide, Mode::Reflect, Mode::Mirror, Mode::Verify, Mode::Transfer})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

SolitonDatad parse_solitons(const Json& doc, const std::string& pointer) {
  const long n = integer(require(doc, "n", pointer), child(pointer, "n"));
  if (n < 1) throw ConfigError(child(pointer, "n"), "number of components must be positive");
  const Json& list = require(doc, "solitons", pointer);
  const std::string lp = child(pointer, "solitons");
  if (!list.is_array()) throw ConfigError(lp, "expected an array of solitons");
  std::vector<SolitonEntryd> entries;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string sp = child(lp, i);
    const double u = number(require(list[i], "u", sp), child(sp, "u"));
    const double v = number(require(list[i], "v", sp), child(sp, "v"));
    const CVectord beta = complex_vector(require(list[i], "beta", sp), child(sp, "beta"));
    if (beta.size() != n)
      throw ConfigError(child(sp, "beta"), "has " + std::to_string(beta.size()) + " components, expected n = " + std::to_string(n));
    try {
      entries.push_back({SpectralPointd(u, v), NormingVectord(beta)});
    } catch (const Error& e) {
      throw ConfigError(sp, e.what());
    }
  }
  try {
    return SolitonDatad(n, std::move(entries));
  } catch (const Error& e) {
    throw ConfigError(lp, e.what());
  }
}

BoundarySpecd parse_boundary(const Json& node, long n, const std::string& pointer) {
  const Json& kind_node = require(node, "kind", pointer);
  if (!kind_node.is_string()) throw ConfigError(child(pointer, "kind"), "expected a string");
  const std::string kind = kind_node.get<std::string>();
  auto signs = [&]() {
    const Json& s = require(node, "signs", pointer);
    const std::string sp = child(pointer, "signs");
    if (!s.is_array()) throw ConfigError(sp, "expected an array of +1/-1");
    std::vector<int> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const long x = integer(s[i], child(sp, i));
      if (x != 1 && x != -1) throw ConfigError(child(sp, i), "boundary signs must be +1 or -1");
      out.push_back(static_cast<int>(x));
    }
    if (static_cast<long>(out.size()) != n)
      throw ConfigError(sp, "has " + std::to_string(out.size()) + " entries, expected n = " + std::to_string(n));
    return out;
  };
  BoundarySpecd spec = BoundarySpecd::robin(0.0);
  if (kind == "robin") {
    spec = BoundarySpecd::robin(number(require(node, "alpha", pointer), child(pointer, "alpha")));
  } else if (kind == "mixed") {
    spec = BoundarySpecd::mixed(signs());
  } else if (kind == "rotated_mixed") {
    const Json& u = require(node, "unitary", pointer);
    const std::string up = child(pointer, "unitary");
    if (!u.is_array() || static_cast<long>(u.size()) != n) throw ConfigError(up, "expected n rows");
    CMatrixd m(n, n);
    for (long r = 0; r < n; ++r) {
      const CVectord row = complex_vector(u[static_cast<std::size_t>(r)], child(up, static_cast<std::size_t>(r)));
      if (row.size() != n) throw ConfigError(child(up, static_cast<std::size_t>(r)), "expected n entries");
      m.row(r) = row.transpose();
    }
    spec = BoundarySpecd::rotated_mixed(m, signs());
  } else {
    throw ConfigError(child(pointer, "kind"), "unknown boundary kind '" + kind + "' (robin, mixed, rotated_mixed)");
  }
  try {
    spec.check(n);
  } catch (const Error& e) {
    throw ConfigError(pointer, e.what());
  }
  return spec;
}

RunConfig parse_config(const Json& doc, Mode mode) {
  if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
  RunConfig c;
  c.mode = mode;
  c.echo = doc;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("/mode", "expected a string");
    const auto m = parse_mode(doc["mode"].get<std::string>());
    if (!m) throw ConfigError("/mode", "unknown mode '" + doc["mode"].get<std::string>() + "'");
    if (*m != mode)
      throw ConfigError("/mode", std::string("document is for mode '") + to_string(*m) + "' but '" + to_string(mode) +
                                     "' was requested");
  }
  if (doc.contains("solitons") || doc.contains("n")) c.data = parse_solitons(doc, "");
  if (doc.contains("boundary")) {
    if (!c.data) throw ConfigError("/n", "a boundary block needs the component count n");
    c.boundary = parse_boundary(doc["boundary"], c.data->n(), "/boundary");
  }
  if (doc.contains("grid")) c.grid = parse_grid(doc["grid"], "/grid");
  if (doc.contains("suite")) c.suite = parse_suite(doc["suite"], "/suite");
  if (doc.contains("tolerances")) c.tolerances = tolerance_map(doc["tolerances"], "/tolerances");
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("/output", "expected a directory path");
    c.output = doc["output"].get<std::string>();
  }

  const bool needs_data = mode != Mode::Verify;
  if (needs_data && !c.data) throw ConfigError("/solitons", "missing required field");
  if ((mode == Mode::Reflect || mode == Mode::Mirror) && !c.boundary)
    throw ConfigError("/boundary", "missing required field");
  if ((mode == Mode::Simulate || mode == Mode::Collide || mode == Mode::Verify) && c.boundary)
    throw ConfigError("/boundary", std::string("not used by mode ") + to_string(mode));
  if (mode == Mode::Simulate && !c.grid) throw ConfigError("/grid", "missing required field");
  if (mode == Mode::Verify && !c.suite) throw ConfigError("/suite", "missing required field");
  return c;
}

RunConfig load_config(const std::filesystem::path& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("", path.string() + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_config(doc, mode);
}

Json complex_to_json(Complexd z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const SolitonDatad& data) {
  Json list = Json::array();
  for (std::size_t j = 0; j < data.size(); ++j) {
    Json beta = Json::array();
    for (Eigen::Index i = 0; i < data.n(); ++i) beta.push_back(complex_to_json(data.beta(j)[i]));
    list.push_back({{"u", data.point(j).u()}, {"v", data.point(j).v()}, {"beta", beta}});
  }
  return {{"n", data.n()}, {"solitons", list}};
}

Json to_json(const BoundarySpecd& spec) {
  Json out{{"kind", spec.name()}};
  if (spec.is_robin()) {
    out["alpha"] = std::get<RobinBoundary<double>>(spec.kind()).alpha;
    return out;
  }
  out["signs"] = spec.signs();
  if (auto* r = std::get_if<RotatedMixedBoundary<double>>(&spec.kind())) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < r->unitary.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < r->unitary.cols(); ++j) row.push_back(complex_to_json(r->unitary(i, j)));
      rows.push_back(row);
    }
    out["unitary"] = rows;
  }
  return out;
}

}  // namespace vsoliton::io
