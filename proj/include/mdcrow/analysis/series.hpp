#pragma once

#include <string>
#include <vector>

namespace mdcrow::analysis {

struct SeriesResult {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string x_label = "Time";
    std::string x_units = "ps";
    std::string y_units;
    std::string provenance;  // trajectory file_id, selection, parameters
};

// CSV with a '#' comment header carrying label, units and provenance.
std::string series_csv(const SeriesResult& s);
SeriesResult parse_series_csv(const std::string& text);

} // namespace mdcrow::analysis
