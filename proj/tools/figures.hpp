#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fiducial::cli {

const std::vector<std::string>& figure_ids();

/// Writes the CSV bundle for one figure into `dir`; returns the file names written.
std::vector<std::string> write_figure(const std::string& id, const std::filesystem::path& dir);

}  // namespace fiducial::cli
