#include "mdcrow/analysis/series.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <sstream>

namespace mdcrow::analysis {

std::string series_csv(const SeriesResult& s) {
    std::string out;
    out += "# label: " + s.label + "\n";
    out += "# x_label: " + s.x_label + "\n";
    out += "# x_units: " + s.x_units + "\n";
    out += "# y_units: " + s.y_units + "\n";
    out += "# provenance: " + replace_all(s.provenance, "\n", " ") + "\n";
    out += s.x_label + "," + s.label + "\n";
    for (size_t i = 0; i < s.x.size(); ++i) out += format_number(s.x[i]) + "," + format_number(s.y[i]) + "\n";
    return out;
}

SeriesResult parse_series_csv(const std::string& text) {
    SeriesResult s;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon == std::string::npos) continue;
            const auto key = line.substr(2, colon - 2);
            const auto value = line.substr(colon + 2);
            if (key == "label") s.label = value;
            else if (key == "x_label") s.x_label = value;
            else if (key == "x_units") s.x_units = value;
            else if (key == "y_units") s.y_units = value;
            else if (key == "provenance") s.provenance = value;
            continue;
        }
        if (trim(line).empty()) continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 2) throw ParseError("series row must have 2 fields: '" + line + "'");
        s.x.push_back(parse_double(f[0], "x"));
        s.y.push_back(parse_double(f[1], "y"));
    }
    return s;
}

} // namespace mdcrow::analysis
