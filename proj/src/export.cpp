#include "vsoliton/io/export.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>

#include <fmt/core.h>

#include "vsoliton/io/report.hpp"

namespace vsoliton::io {

std::string grid_csv(const FieldGridd& grid) {
  std::string out = "x,t";
  for (Eigen::Index c = 1; c <= grid.n(); ++c) out += fmt::format(",re_{},im_{}", c, c);
  out += '\n';
  for (Eigen::Index it = 0; it < grid.nt; ++it)
    for (Eigen::Index ix = 0; ix < grid.nx; ++ix) {
      out += fmt::format("{:.17g},{:.17g}", grid.x(ix), grid.t(it));
      const auto r = grid.at(ix, it);
      for (Eigen::Index c = 0; c < grid.n(); ++c) out += fmt::format(",{:.17g},{:.17g}", r[c].real(), r[c].imag());
      out += '\n';
    }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  out << text;
  out.close();
  if (!out) throw IoError("write to " + path.string() + " failed: " + std::strerror(errno));
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::filesystem::path export_grid(const FieldGridd& grid, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  const auto path = dir / "grid.csv";
  write_text(path, grid_csv(grid));
  return path;
}

Json make_manifest(const std::string& mode, const Json& config, std::optional<std::uint64_t> dataset_digest,
                   const std::vector<std::string>& files) {
  Json m{{"tool", "vsoliton"}, {"version", kToolVersion}, {"mode", mode}, {"config", config}, {"files", files}};
  m["dataset_digest"] = dataset_digest ? Json(fmt::format("{:016x}", *dataset_digest)) : Json(nullptr);
  return m;
}

Json halfline_to_json(const HalfLineDatad& hl) {
  Json doc = to_json(hl.combined);
  doc["boundary"] = to_json(hl.spec);
  return doc;
}

HalfLineDatad halfline_from_json(const Json& doc) {
  const auto combined = parse_solitons(doc, "");
  if (!doc.contains("boundary")) throw ConfigError("/boundary", "missing required field");
  const auto spec = parse_boundary(doc["boundary"], combined.n(), "/boundary");
  try {
    return assemble_halfline(combined, spec);
  } catch (const Error& e) {
    throw ConfigError("/solitons", e.what());
  }
}

}  // namespace vsoliton::io
