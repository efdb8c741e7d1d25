#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seqent::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::string header_comment;  // embedded as an XML comment
};

/// Line plot as standalone SVG. Output depends only on the inputs.
void write_svg(std::ostream& os, const PlotSpec& plot);

}  // namespace seqent::cli
