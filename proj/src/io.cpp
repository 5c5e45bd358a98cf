#include "rydmol/io.hpp"

#include <cstdio>
#include <fstream>

namespace rydmol::io {

std::string format_double(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.16e", v);
    return b;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : path_(path), ncols_(columns.size()) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += columns[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw ConfigError("CsvWriter: column count mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += format_double(values[i]);
    }
    buf_ += '\n';
}

CsvWriter::~CsvWriter() {
    std::ofstream out(path_, std::ios::binary);
    out << buf_;
}

}  // namespace rydmol::io
