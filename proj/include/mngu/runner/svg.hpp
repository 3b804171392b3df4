#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mngu/runner/metrics.hpp"

namespace mngu {

struct Curve {
  std::string label;
  AggregateSeries series;
};

// Static learning-curve plot: one mean polyline plus a translucent CI band
// per curve, shared axes, legend from the labels. Output bytes depend only on
// the inputs.
void write_curve_svg(std::ostream& out, const std::vector<Curve>& curves,
                     const std::string& title);

}  // namespace mngu
