#pragma once

#include "mdcrow/analysis/series.hpp"
#include "mdcrow/image/raster.hpp"

#include <string>
#include <vector>

namespace mdcrow::analysis {

// Line plot of one or more series sharing x and y units. Mixed units on
// either axis are a UsageError.
image::Image plot_series(const std::vector<SeriesResult>& series, const std::string& title);

} // namespace mdcrow::analysis
