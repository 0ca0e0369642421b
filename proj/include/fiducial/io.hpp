#pragma once

// Flat-file output: CSV with 17 significant digits, '.' decimal, '\n' line ends.

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace fiducial::io {

/// "%.17g"; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

struct Column {
    std::string name;
    const std::vector<double>* values;
};

/// Columns must share a length.
void write_csv(std::ostream& out, const std::vector<Column>& columns);
void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace fiducial::io
