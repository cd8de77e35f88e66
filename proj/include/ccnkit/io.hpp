#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ccnkit/matrix.hpp"

namespace ccn {

/// Shortest-safe text for a double: 17 significant digits, %.17g style.
std::string format_double(double v);

/// Header `<prefix>1,...,<prefix>k`, then one comma-separated row per matrix row.
void write_csv(std::ostream& out, const Matrix& m, std::string_view prefix);
void write_csv(const std::filesystem::path& path, const Matrix& m, std::string_view prefix);

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/// Numeric CSV with a header row. Errors name the file and 1-based line.
CsvTable read_csv(std::istream& in, std::string_view source = "<stream>");
CsvTable read_csv(const std::filesystem::path& path);
inline Matrix read_matrix(const std::filesystem::path& path) { return read_csv(path).values; }

std::string read_text(const std::filesystem::path& path);
/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace ccn
