#include "input.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "varbound/error.hpp"

namespace varbound::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view token, std::size_t line) {
  double value = 0.0;
  // from_chars rejects a leading '+', which people do write.
  const std::string_view body = (token.size() > 1 && token.front() == '+') ? token.substr(1) : token;
  const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || end != body.data() + body.size()) {
    throw InputError("line " + std::to_string(line) + ": not a number: '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw InputError("line " + std::to_string(line) + ": non-finite value '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view row) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = row.find(',', start);
    std::string_view cell = trim(row.substr(start, comma == std::string_view::npos ? row.npos : comma - start));
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') {
      cell = cell.substr(1, cell.size() - 2);
    }
    cells.push_back(cell);
    if (comma == std::string_view::npos) {
      return cells;
    }
    start = comma + 1;
  }
}

}  // namespace

std::vector<double> parse_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') {
      continue;
    }
    std::istringstream tokens{std::string(content)};
    std::string token;
    while (tokens >> token) {
      values.push_back(parse_number(token, line_no));
    }
  }
  return values;
}

std::vector<double> parse_csv_column(std::istream& in, std::string_view column) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t index = 0;
  bool have_header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') {
      continue;
    }
    const auto cells = split_csv(content);
    if (!have_header) {
      std::size_t i = 0;
      while (i < cells.size() && cells[i] != column) ++i;
      if (i == cells.size()) {
        throw InputError("CSV header has no column '" + std::string(column) + "'");
      }
      index = i;
      have_header = true;
      continue;
    }
    if (index >= cells.size()) {
      throw InputError("line " + std::to_string(line_no) + ": missing column '" + std::string(column) + "'");
    }
    values.push_back(parse_number(cells[index], line_no));
  }
  if (!have_header) {
    throw InputError("CSV input has no header row");
  }
  return values;
}

}  // namespace varbound::cli
