#pragma once

#include <istream>
#include <string_view>
#include <vector>

namespace varbound::cli {

/// Whitespace/newline separated decimal numbers; lines whose first
/// non-blank character is '#' are skipped. Throws InputError naming the
/// offending line on unparseable or non-finite tokens.
std::vector<double> parse_values(std::istream& in);

/// One column, selected by header name, of a comma-separated file with a
/// header row. Surrounding whitespace and double quotes are stripped.
std::vector<double> parse_csv_column(std::istream& in, std::string_view column);

}  // namespace varbound::cli
