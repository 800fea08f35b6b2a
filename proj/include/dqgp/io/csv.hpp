#pragma once

#include <string>
#include <vector>

namespace dqgp::io {

/// %.17g, which strtod reads back to the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

/// A CSV file with a schema line:
///   # dqgp <schema> v<version>
///   col_a,col_b,...
///   rows...
struct CsvTable {
  std::string schema;
  int version = 1;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column, or -1.
  int column(const std::string& name) const;
  bool has(const std::string& name) const { return column(name) >= 0; }
  /// Numeric column by name. Throws ConfigError if absent.
  std::vector<double> numbers(const std::string& name) const;
};

std::string to_csv(const CsvTable& t);
/// Throws ConfigError on a missing schema line or ragged rows.
CsvTable parse_csv(const std::string& text, const std::string& origin = "<memory>");

/// Writes to a temporary sibling and renames it into place, so readers never
/// observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

}  // namespace dqgp::io
