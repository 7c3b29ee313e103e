#include "csv.hpp"

#include "sievevar/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sievevar::app {

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool try_parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return !text.empty() && ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) {
    return "0";  // also folds -0
  }
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, ptr};
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) {
      return c;
    }
  }
  throw InputError("missing column \"" + std::string(name) + "\"");
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text) {
  double v = 0.0;
  if (!try_parse_double(text, v)) {
    throw InputError("not a number: \"" + std::string(text) + "\"");
  }
  return v;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty()) {
    throw InputError(path.string() + " is empty");
  }
  CsvTable table;
  table.header = split_csv_line(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto row = split_csv_line(lines[i]);
    if (row.size() != table.header.size()) {
      throw InputError(path.string() + ": line " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

MatrixXd read_data_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size() && numeric; ++c) {
      numeric = try_parse_double(fields[c], row[c]);
    }
    if (!numeric) {
      if (i == 0) {
        continue;  // header
      }
      throw InputError(path.string() + ": non-numeric value on line " + std::to_string(i + 1));
    }
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw InputError(path.string() + ": non-finite value on line " + std::to_string(i + 1));
      }
    }
    if (rows.empty()) {
      width = row.size();
    } else if (row.size() != width) {
      throw InputError(path.string() + ": line " + std::to_string(i + 1) + " has " +
                       std::to_string(row.size()) + " columns, expected " + std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InputError(path.string() + " contains no data rows");
  }
  MatrixXd y(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t c = 0; c < width; ++c) {
      y(static_cast<Index>(t), static_cast<Index>(c)) = rows[t][c];
    }
  }
  return y;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw InputError("cannot write " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace sievevar::app
