#include "mdcrow/common/kv.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

namespace mdcrow {

namespace {

std::vector<std::string> tokenize(std::string_view input) {
    std::vector<std::string> tokens;
    std::string cur;
    bool quoted = false;
    bool have = false;
    for (char c : input) {
        if (quoted) {
            if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            have = true;
        } else if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';') {
            if (have) tokens.push_back(cur);
            cur.clear();
            have = false;
        } else {
            cur += c;
            have = true;
        }
    }
    if (quoted) throw ParseError("unterminated quote in tool input");
    if (have) tokens.push_back(cur);
    return tokens;
}

} // namespace

ToolArgs ToolArgs::parse(std::string_view input) {
    ToolArgs args;
    // glue "key = value" and "key= value" back together
    std::vector<std::string> toks;
    for (auto& tok : tokenize(input)) {
        if (!toks.empty() && (tok.front() == '=' || (toks.back().back() == '=' && toks.back().size() > 0 &&
                                                     toks.back().find('=') == toks.back().size() - 1)))
            toks.back() += tok;
        else
            toks.push_back(tok);
    }
    for (auto& tok : toks) {
        auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0) {
            args.positional_.push_back(tok);
        } else {
            args.named_[to_lower(trim(tok.substr(0, eq)))] = trim(tok.substr(eq + 1));
        }
    }
    return args;
}

bool ToolArgs::has(std::string_view key) const { return named_.find(key) != named_.end(); }

std::optional<std::string> ToolArgs::get(std::string_view key) const {
    auto it = named_.find(key);
    if (it == named_.end()) return std::nullopt;
    return it->second;
}

std::string ToolArgs::require(std::string_view key, std::string_view usage) const {
    auto v = get(key);
    if (!v || v->empty())
        throw UsageError("missing required argument '" + std::string(key) + "'. Usage: " +
                         std::string(usage));
    return *v;
}

double ToolArgs::get_double(std::string_view key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(*v, key) : fallback;
}

long long ToolArgs::get_int(std::string_view key, long long fallback) const {
    auto v = get(key);
    return v ? parse_int(*v, key) : fallback;
}

bool ToolArgs::get_bool(std::string_view key, bool fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    const auto s = to_lower(*v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ParseError("invalid boolean for " + std::string(key) + ": '" + *v + "'");
}

std::optional<std::string> ToolArgs::primary(std::string_view key) const {
    if (auto v = get(key)) return v;
    if (!positional_.empty()) return positional_.front();
    return std::nullopt;
}

} // namespace mdcrow
