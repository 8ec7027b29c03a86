#include "smbp/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "smbp/error.hpp"

namespace smbp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<double> parse_row(std::string_view line, std::size_t line_no) {
  std::vector<double> row;
  for (std::string_view field : split_fields(line)) row.push_back(parse_double(field, line_no));
  return row;
}

}  // namespace

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) throw ParseError(line, "empty numeric field");
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value");
  return value;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

FunctionalSample read_sample_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> abscissae;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      abscissae = parse_row(line, line_no);
      break;
    }
  }
  if (abscissae.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing grid row");
  GridPtr grid;
  try {
    grid = std::make_shared<const Grid>(std::move(abscissae));
  } catch (const InvalidArgument& e) {
    throw ParseError(line_no, e.what());
  }

  std::vector<double> values;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row = parse_row(line, line_no);
    if (row.size() != grid->size()) {
      throw ParseError(line_no, "expected " + std::to_string(grid->size()) + " values, found " +
                                    std::to_string(row.size()));
    }
    values.insert(values.end(), row.begin(), row.end());
    ++n;
  }
  if (n == 0) throw ParseError(line_no + 1, "no curves after the grid row");
  return FunctionalSample(std::move(grid), n, std::move(values));
}

FunctionalSample read_sample_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_sample_csv(in);
}

void write_sample_csv(std::ostream& out, const FunctionalSample& sample) {
  auto write_row = [&out](std::span<const double> row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  };
  write_row(sample.grid().points());
  for (std::size_t i = 0; i < sample.size(); ++i) write_row(sample.row(i));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move " + tmp.string() + " to " + path.string());
  }
}

}  // namespace smbp
