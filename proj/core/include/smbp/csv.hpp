#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "smbp/grid.hpp"

namespace smbp {

// Curve files: the first row holds the grid abscissae, every further row is
// one curve sampled on that grid. Comma separated, '.' decimal point.

FunctionalSample read_sample_csv(std::istream& in);
FunctionalSample read_sample_csv(const std::filesystem::path& path);

void write_sample_csv(std::ostream& out, const FunctionalSample& sample);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Parses one numeric field. Throws ParseError with `line` on failure.
double parse_double(std::string_view field, std::size_t line);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace smbp
