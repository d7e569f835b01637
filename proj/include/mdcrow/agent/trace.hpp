#pragma once

#include "mdcrow/agent/action.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mdcrow::agent {

struct TraceStep {
    int index = 0;  // 1-based
    AgentAction action;
    std::string observation;  // full text, never truncated
    double wall_time = 0.0;   // seconds
    bool error = false;
    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct ParseFailureRecord {
    int step = 0;
    int attempt = 0;
    std::string reason;
    std::string detail;
    std::string raw;
    friend bool operator==(const ParseFailureRecord&, const ParseFailureRecord&) = default;
};

enum class Outcome { running, final_answer, step_budget_exhausted, unrecoverable_error };
std::string to_string(Outcome o);
Outcome parse_outcome(std::string_view s);

struct AgentTrace {
    std::string user_input;
    std::string context;
    std::vector<TraceStep> steps;
    Outcome outcome = Outcome::running;
    std::string final_text;
    std::string error;  // unrecoverable_error detail
    std::vector<ParseFailureRecord> parse_failures;
    friend bool operator==(const AgentTrace&, const AgentTrace&) = default;
};

nlohmann::json to_json(const AgentTrace& t);
AgentTrace trace_from_json(const nlohmann::json& j);  // throws ParseError
nlohmann::json to_json(const TraceStep& s);

} // namespace mdcrow::agent
