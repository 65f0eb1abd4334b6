#include "infotweet/delimited.hpp"

#include <fstream>
#include <sstream>

#include "infotweet/error.hpp"

namespace infotweet {

std::vector<DelimitedRow> parse_delimited(std::string_view text, char delimiter) {
  std::vector<DelimitedRow> rows;
  DelimitedRow row;
  std::string field;
  std::size_t line = 1;
  std::size_t i = 0;
  bool row_started = false;
  bool field_quoted = false;
  row.line = 1;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_row = [&] {
    end_field();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !row_started;
    if (!blank) rows.push_back(std::move(row));
    row = DelimitedRow{};
    row_started = false;
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '"' && field.empty() && !field_quoted) {
      const std::size_t start_line = line;
      field_quoted = true;
      row_started = true;
      ++i;
      for (;;) {
        if (i >= text.size()) {
          throw ParseError("unterminated quoted field starting at line " +
                           std::to_string(start_line));
        }
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (text[i] == '\n') ++line;
        field.push_back(text[i]);
        ++i;
      }
      continue;
    }
    if (c == delimiter) {
      row_started = true;
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      ++i;
      continue;
    }
    if (c == '\n') {
      end_row();
      ++line;
      row.line = line;
      ++i;
      continue;
    }
    row_started = true;
    field.push_back(c);
    ++i;
  }
  if (row_started || !field.empty()) end_row();
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace infotweet
