#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace mdcrow::agent {

/// One parsed LLM step: a tool call or a final answer, with its thought.
struct AgentAction {
    enum class Kind { tool_call, final_answer };

    std::string thought;
    Kind kind = Kind::tool_call;
    std::string tool_name;   // tool_call only
    std::string tool_input;  // tool_call only
    std::string answer;      // final_answer only

    static AgentAction call(std::string thought, std::string tool, std::string input);
    static AgentAction final(std::string thought, std::string answer);

    friend bool operator==(const AgentAction&, const AgentAction&) = default;
};

std::string to_string(AgentAction::Kind k);

enum class ParseFailureReason {
    no_action,
    multiple_actions,
    unfenced_action,
    malformed_action,
    action_and_final_answer,
    empty_final_answer,
};

std::string to_string(ParseFailureReason r);

struct ParseFailure {
    ParseFailureReason reason;
    std::string detail;
};

using ParseResult = std::variant<AgentAction, ParseFailure>;

ParseResult parse_llm_output(std::string_view text);

// Canonical text of an action in the prompt's Thought/Action format.
std::string render_action(const AgentAction& action);

} // namespace mdcrow::agent
