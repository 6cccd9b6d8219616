#pragma once

// Standalone SVG line charts for trajectory CSVs — enough to eyeball
// convergence curves without any external renderer. Output is fully
// deterministic: fixed palette, fixed layout, fixed-precision coordinates,
// so golden-file byte comparison is a valid test.

#include <string>
#include <vector>

#include "mlr/csv.hpp"

namespace mlr {

struct PlotOptions {
  std::string title;
  bool logx = false;  // log10 axis; nonpositive values are skipped
  bool logy = false;
  int width = 800;
  int height = 500;
};

/// Render one polyline per y column against the x column.
/// Throws ConfigError for unknown columns (listing what exists), an empty
/// table, or when log scaling leaves nothing to draw.
std::string render_line_chart(const Table& t, const std::string& x_column,
                              const std::vector<std::string>& y_columns,
                              const PlotOptions& opts);

/// read_csv + render_line_chart + write to out_path.
void emit_svg(const std::string& csv_path, const std::string& x_column,
              const std::vector<std::string>& y_columns,
              const std::string& out_path, const PlotOptions& opts);

}  // namespace mlr
