#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace surveymon::csv {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Row = std::vector<std::string>;

/// RFC 4180 reader. Lines starting with '#' outside quotes are comments;
/// blank lines are skipped.
std::vector<Row> read(std::istream& in);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string join(const Row& row);

/// Shortest representation that round-trips through parse_number.
std::string format_number(double v);

/// Throws CsvError when `text` is not entirely a number.
double parse_number(std::string_view text);

}  // namespace surveymon::csv
