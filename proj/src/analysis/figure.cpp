#include "mdcrow/analysis/figure.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/image/plot.hpp"

namespace mdcrow::analysis {

image::Image plot_series(const std::vector<SeriesResult>& series, const std::string& title) {
    if (series.empty()) throw UsageError("nothing to plot: no series given");
    const auto& first = series.front();
    for (const auto& s : series) {
        if (s.y_units.empty()) throw UsageError("series '" + s.label + "' has no units");
        if (s.y_units != first.y_units)
            throw UsageError("cannot plot '" + s.label + "' (" + s.y_units + ") and '" + first.label + "' (" +
                             first.y_units + ") on one y axis: units differ");
        if (s.x_units != first.x_units)
            throw UsageError("cannot plot '" + s.label + "' against '" + first.label + "': x units differ (" +
                             s.x_units + " vs " + first.x_units + ")");
        if (s.x.size() != s.y.size()) throw UsageError("series '" + s.label + "' has mismatched x and y lengths");
    }
    image::LinePlot p;
    p.title = title;
    p.x_label = first.x_label + " (" + first.x_units + ")";
    p.y_label = (series.size() == 1 ? first.label : std::string("Value")) + " (" + first.y_units + ")";
    for (const auto& s : series) p.lines.push_back({s.label, s.x, s.y});
    p.markers = first.x.size() <= 30;
    return image::render_line_plot(p);
}

} // namespace mdcrow::analysis
