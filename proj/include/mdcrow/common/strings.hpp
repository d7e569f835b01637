#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mdcrow {

std::string trim(std::string_view s);
std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_icase(std::string_view s, std::string_view prefix);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Parses a double/int, throwing ParseError that names `what` on failure.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

// Shortest round-trippable decimal form ("300", "0.002", "1e-05").
std::string format_number(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace mdcrow
