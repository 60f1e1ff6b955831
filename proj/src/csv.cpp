#include "sentikit/csv.hpp"

#include <sstream>

#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::csv {

std::vector<Row> parse(std::string_view text, char sep) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == sep) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF handled on the '\n'
    } else if (c == '\n') {
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) fail(ErrorKind::parse, "unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string escape(std::string_view field, char sep) {
  bool needs = field.find_first_of(std::string{sep, '"', '\n', '\r'}) != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_row(std::ostream& out, const Row& row, char sep) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << sep;
    out << escape(row[i], sep);
  }
  out << '\n';
}

std::string format_row(const Row& row, char sep) {
  std::ostringstream ss;
  write_row(ss, row, sep);
  return ss.str();
}

Header::Header(const Row& names) : size_(names.size()) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string key = to_lower_ascii(trim(names[i]));
    // Strip a UTF-8 byte order mark on the first column.
    if (i == 0 && key.rfind("\xEF\xBB\xBF", 0) == 0) key.erase(0, 3);
    index_.emplace(std::move(key), i);
  }
}

std::optional<std::size_t> Header::find(std::string_view name) const {
  auto it = index_.find(to_lower_ascii(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Header::require(std::string_view name) const {
  auto idx = find(name);
  if (!idx) fail(ErrorKind::parse, "missing CSV column '" + std::string(name) + "'");
  return *idx;
}

}  // namespace sentikit::csv
