#include "mlr/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> Table::numeric_column(const std::string& name) const {
  const int idx = column_index(name);
  if (idx < 0) {
    std::string msg = "csv: no column '" + name + "'; available:";
    for (const std::string& c : columns) msg += " " + c;
    throw ConfigError(msg);
  }
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cell = rows[r][static_cast<std::size_t>(idx)];
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0' || errno == ERANGE) {
      throw IoError("csv: non-numeric cell '" + cell + "' in column '" + name +
                    "' row " + std::to_string(r + 1));
    }
    out.push_back(v);
  }
  return out;
}

void Table::append_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  append_row(std::move(cells));
}

void Table::append_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) {
    throw ConfigError("csv: row width " + std::to_string(cells.size()) +
                      " does not match " + std::to_string(columns.size()) +
                      " columns");
  }
  rows.push_back(std::move(cells));
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) os << ',';
    os << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << row[i];
    }
    os << '\n';
  }
  return os.str();
}

void write_csv(const std::string& path, const Table& t) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << to_csv(t);
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

Table read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);

  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && lineno > 1) continue;  // tolerate a trailing blank
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (lineno == 1) {
      t.columns = std::move(cells);
    } else {
      if (cells.size() != t.columns.size()) {
        throw IoError("csv: line " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(t.columns.size()) + " (" + path + ")");
      }
      t.rows.push_back(std::move(cells));
    }
  }
  if (t.columns.empty()) throw IoError("csv: empty file: " + path);
  return t;
}

}  // namespace mlr
