#pragma once

// Minimal CSV layer for the experiment artifacts. All files are plain
// comma-separated with a single header row; cells never contain commas or
// quotes, so no quoting dialect is needed. Doubles are serialized with 17
// significant digits, which round-trips every finite value exactly.

#include <string>
#include <vector>

namespace mlr {

/// %.17g rendering of v (shortest form that round-trips).
std::string format_double(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// Position of a named column, or -1 when absent.
  int column_index(const std::string& name) const;

  /// Parse a whole column as doubles. Unknown names raise ConfigError that
  /// lists the available columns; non-numeric cells raise IoError.
  std::vector<double> numeric_column(const std::string& name) const;

  void append_row(const std::vector<double>& values);
  void append_row(std::vector<std::string> cells);
};

std::string to_csv(const Table& t);

/// Write atomically enough for our purposes: truncate + stream + flush.
/// Throws IoError on any stream failure.
void write_csv(const std::string& path, const Table& t);

/// Parse a CSV file produced by this module (or anything matching the
/// dialect). Ragged rows raise IoError naming the line.
Table read_csv(const std::string& path);

}  // namespace mlr
