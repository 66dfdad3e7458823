#pragma once

#include <string>
#include <vector>

#include "corpusdiff/tsne.hpp"

namespace corpusdiff {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

// Fixed-layout line chart with axes, ticks, and a legend. `meta` is embedded
// as an XML comment (config hash + seed). Output is deterministic.
std::string svg_line_chart(const std::vector<SvgSeries>& series,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::string& meta);

// Scatter of embedding points: group A blue, group B red, unknown grey.
std::string svg_scatter(const std::vector<EmbeddingPoint>& points,
                        const std::string& title, const std::string& meta);

}  // namespace corpusdiff
