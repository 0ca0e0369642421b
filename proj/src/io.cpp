#include "fiducial/io.hpp"

#include "fiducial/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace fiducial::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<Column>& columns) {
    if (columns.empty()) return;
    const std::size_t n = columns.front().values->size();
    for (const auto& c : columns)
        if (c.values->size() != n) throw Error("csv columns differ in length");
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
    out << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << format_double((*columns[c].values)[r]);
        out << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_csv(out, columns);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

}  // namespace fiducial::io
