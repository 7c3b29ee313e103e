#pragma once

#include "sievevar/matrix_seq.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sievevar::app {

/// Shortest round-trip decimal form ('.' separator, no exponent padding).
[[nodiscard]] std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws InputError if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
};

[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);
[[nodiscard]] double parse_double(std::string_view text);

/// Headed table; blank lines and trailing CR are ignored.
[[nodiscard]] CsvTable read_csv_table(const std::filesystem::path& path);

/// Numeric T x K sample. A first line that does not parse as numbers is taken as a header.
[[nodiscard]] MatrixXd read_data_csv(const std::filesystem::path& path);

/// Writes `content` verbatim (binary mode, so LF stays LF).
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sievevar::app
