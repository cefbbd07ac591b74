#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fdmac {

// Minimal RFC-4180-style writer: fields with commas, quotes or newlines
// are quoted, quotes doubled. One fixed header, then data rows.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);

  static std::string escape(const std::string& field);
  static std::string format_double(double value);

 private:
  void write_line(const std::vector<std::string>& fields);
  std::ostream& out_;
  std::size_t columns_ = 0;
};

}  // namespace fdmac
