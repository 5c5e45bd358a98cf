#ifndef RYDMOL_IO_HPP_
#define RYDMOL_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "rydmol/types.hpp"

namespace rydmol::io {

// Deterministic CSV writer: header row, comma separator, fixed "%.16e"
// formatting so identical runs produce byte-identical files. Complex values
// appear as paired Re_/Im_ columns.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    void row(const std::vector<double>& values);
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::string buf_;
    size_t ncols_;
};

std::string format_double(double v);

}  // namespace rydmol::io

#endif
