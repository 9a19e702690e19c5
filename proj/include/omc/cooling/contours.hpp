#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace omc::cooling {

using Polyline = std::vector<std::pair<double, double>>;

// Marching squares on a rectilinear grid. `values` is x-major
// (index = i_x * y.size() + i_y). Crossings on cell edges are located by
// bisection on `field` (the exact function) when given, else by linear
// interpolation of the grid values. Segments are chained into polylines.
// When log_axes is set, interpolation and bisection work in log x and log y.
std::vector<Polyline> iso_contours(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> values, double level,
                                   const std::function<double(double, double)>& field = {},
                                   bool log_axes = true);

}  // namespace omc::cooling
