#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace mixsde {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double v);

using CsvCell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t, bool>;

CsvCell cell(const std::optional<double>& v);

/// RFC 4180 writer: CRLF line ends, fields quoted when needed.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<CsvCell>& cells);
  const std::vector<std::string>& header() const { return header_; }

  static std::string escape(const std::string& field);

 private:
  std::ostream& out_;
  std::vector<std::string> header_;
};

/// Parses RFC 4180 text into rows of fields.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace mixsde
