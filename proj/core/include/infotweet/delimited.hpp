#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace infotweet {

struct DelimitedRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the row starts
};

// Splits delimiter-separated text into rows. Fields may be wrapped in double
// quotes; a doubled quote inside a quoted field is a literal quote, and quoted
// fields may span lines. CRLF and LF line endings are both accepted. Blank
// lines are skipped. Throws ParseError on an unterminated quoted field.
std::vector<DelimitedRow> parse_delimited(std::string_view text, char delimiter);

std::string read_file(const std::string& path);

}  // namespace infotweet
