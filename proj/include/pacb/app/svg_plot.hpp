#pragma once

#include <string>
#include <string_view>
#include <vector>

// Rate-versus-sweep-value line chart rendered from sweep CSV text alone.

namespace pacb::app {

struct PlotLabels {
  std::string title;
  std::string x_label;
  std::vector<std::string> curve_labels;  // indexed by curve_id; missing ones print "curve N"
};

/// Throws std::invalid_argument if the CSV header or a row is malformed.
std::string plot_sweep_svg(std::string_view csv_text, const PlotLabels& labels);

}  // namespace pacb::app
