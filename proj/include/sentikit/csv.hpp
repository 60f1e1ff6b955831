#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sentikit::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
// newlines. A trailing newline does not produce an empty row. Throws
// Error(parse) on an unterminated quote.
std::vector<Row> parse(std::string_view text, char sep = ',');

std::string escape(std::string_view field, char sep = ',');
void write_row(std::ostream& out, const Row& row, char sep = ',');
std::string format_row(const Row& row, char sep = ',');

// Column lookup over a header row, case-insensitive.
class Header {
 public:
  explicit Header(const Row& names);

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t require(std::string_view name) const;
  std::size_t size() const { return size_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t size_;
};

}  // namespace sentikit::csv
