#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsoliton/io/config.hpp"
#include "vsoliton/verification.hpp"

namespace vsoliton::io {

/// Filesystem failure; the message carries the OS error text.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with header x,t,re_1,im_1,...; rows ordered by t, then x. Numbers are
/// printed with 17 significant digits so the file round-trips exactly.
std::string grid_csv(const FieldGridd& grid);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);

/// Writes <dir>/grid.csv; creates the directory if needed.
std::filesystem::path export_grid(const FieldGridd& grid, const std::filesystem::path& dir);

/// Run manifest: tool version, echoed config, dataset digest and the list of
/// files written next to it.
Json make_manifest(const std::string& mode, const Json& config, std::optional<std::uint64_t> dataset_digest,
                   const std::vector<std::string>& files);

/// Half-line data in the configuration document format: "n", "solitons"
/// (the N real points followed by their N mirrors) and "boundary".
Json halfline_to_json(const HalfLineDatad& hl);
HalfLineDatad halfline_from_json(const Json& doc);

}  // namespace vsoliton::io
