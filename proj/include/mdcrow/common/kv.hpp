#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow {

/// Action-input arguments of a tool.
///
/// Tools receive a single opaque string. It is either a bare identifier
/// ("1LYZ") or a list of key=value pairs separated by whitespace or commas.
/// Values containing spaces are double-quoted. Bare tokens are collected as
/// positional arguments.
class ToolArgs {
public:
    static ToolArgs parse(std::string_view input);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;
    std::string require(std::string_view key, std::string_view usage) const;
    double get_double(std::string_view key, double fallback) const;
    long long get_int(std::string_view key, long long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    const std::vector<std::string>& positional() const { return positional_; }
    const std::map<std::string, std::string, std::less<>>& named() const { return named_; }

    // First positional argument, or the value of `key` when given by name.
    std::optional<std::string> primary(std::string_view key) const;

private:
    std::map<std::string, std::string, std::less<>> named_;
    std::vector<std::string> positional_;
};

} // namespace mdcrow
