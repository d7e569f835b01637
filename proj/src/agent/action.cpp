#include "mdcrow/agent/action.hpp"

#include "mdcrow/common/strings.hpp"

#include <json.hpp>

#include <vector>

namespace mdcrow::agent {

using nlohmann::json;

AgentAction AgentAction::call(std::string thought, std::string tool, std::string input) {
    AgentAction a;
    a.thought = std::move(thought);
    a.kind = Kind::tool_call;
    a.tool_name = std::move(tool);
    a.tool_input = std::move(input);
    return a;
}

AgentAction AgentAction::final(std::string thought, std::string answer) {
    AgentAction a;
    a.thought = std::move(thought);
    a.kind = Kind::final_answer;
    a.answer = std::move(answer);
    return a;
}

std::string to_string(AgentAction::Kind k) {
    return k == AgentAction::Kind::tool_call ? "tool_call" : "final_answer";
}

std::string to_string(ParseFailureReason r) {
    switch (r) {
        case ParseFailureReason::no_action: return "no_action";
        case ParseFailureReason::multiple_actions: return "multiple_actions";
        case ParseFailureReason::unfenced_action: return "unfenced_action";
        case ParseFailureReason::malformed_action: return "malformed_action";
        case ParseFailureReason::action_and_final_answer: return "action_and_final_answer";
        case ParseFailureReason::empty_final_answer: return "empty_final_answer";
    }
    return "unknown";
}

namespace {

struct Fence {
    std::size_t open;   // position of the opening ```
    std::size_t close;  // position just past the closing ```
    std::string body;
};

// ``` pairs in order; an unmatched opener runs to the end of the text.
std::vector<Fence> fences(std::string_view text) {
    std::vector<Fence> out;
    std::size_t pos = 0;
    while (true) {
        auto open = text.find("```", pos);
        if (open == std::string_view::npos) break;
        auto body_start = open + 3;
        auto close = text.find("```", body_start);
        Fence f;
        f.open = open;
        if (close == std::string_view::npos) {
            f.body = std::string(text.substr(body_start));
            f.close = text.size();
            out.push_back(f);
            break;
        }
        f.body = std::string(text.substr(body_start, close - body_start));
        f.close = close + 3;
        out.push_back(f);
        pos = f.close;
    }
    return out;
}

// Drops an info string such as "json" on the opening fence line.
std::string fence_payload(const std::string& body) {
    auto nl = body.find('\n');
    if (nl != std::string::npos) {
        auto tag = trim(body.substr(0, nl));
        if (!tag.empty() && tag.find('{') == std::string::npos) return body.substr(nl + 1);
    }
    return body;
}

std::string strip_fences(std::string_view text, const std::vector<Fence>& fs) {
    std::string out;
    std::size_t pos = 0;
    for (const auto& f : fs) {
        out += text.substr(pos, f.open - pos);
        out += '\n';
        pos = f.close;
    }
    if (pos < text.size()) out += text.substr(pos);
    return out;
}

bool looks_like_action(const std::string& s) {
    return s.find("\"action\"") != std::string::npos || s.find("'action'") != std::string::npos;
}

std::string extract_thought(std::string_view prose) {
    std::string p(prose);
    auto t = p.find("Thought:");
    std::string thought = t == std::string::npos ? p : p.substr(t + 8);
    for (const char* stop : {"Action:", "Final Answer:"}) {
        auto s = thought.find(stop);
        if (s != std::string::npos) thought = thought.substr(0, s);
    }
    return trim(thought);
}

} // namespace

ParseResult parse_llm_output(std::string_view text) {
    const auto fs = fences(text);

    struct Candidate {
        std::size_t fence;
        json obj;
    };
    std::vector<Candidate> actions;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto payload = trim(fence_payload(fs[i].body));
        if (!looks_like_action(payload)) continue;
        if (fs[i].close == text.size() && text.substr(fs[i].open).find("```", 3) == std::string_view::npos)
            return ParseFailure{ParseFailureReason::malformed_action, "action block is missing its closing fence"};
        json obj;
        try {
            obj = json::parse(payload);
        } catch (const json::exception& e) {
            return ParseFailure{ParseFailureReason::malformed_action, std::string("action block is not valid JSON: ") + e.what()};
        }
        if (!obj.is_object())
            return ParseFailure{ParseFailureReason::malformed_action, "action block must be a JSON object"};
        actions.push_back({i, std::move(obj)});
    }

    const std::string outside = strip_fences(text, fs);
    const auto fa = outside.find("Final Answer:");
    const bool has_final_text = fa != std::string::npos;

    if (actions.size() > 1)
        return ParseFailure{ParseFailureReason::multiple_actions,
                            std::to_string(actions.size()) + " action blocks found; give exactly one"};

    if (actions.empty()) {
        if (has_final_text) {
            auto answer = trim(outside.substr(fa + 13));
            if (answer.empty()) return ParseFailure{ParseFailureReason::empty_final_answer, "Final Answer is empty"};
            return AgentAction::final(extract_thought(outside.substr(0, fa)), answer);
        }
        if (looks_like_action(outside))
            return ParseFailure{ParseFailureReason::unfenced_action, "the action JSON must be wrapped in ``` fences"};
        return ParseFailure{ParseFailureReason::no_action, "no action block and no Final Answer"};
    }

    const auto& obj = actions.front().obj;
    if (!obj.contains("action") || !obj["action"].is_string())
        return ParseFailure{ParseFailureReason::malformed_action, "\"action\" must be a string naming a tool"};
    if (!obj.contains("action_input"))
        return ParseFailure{ParseFailureReason::malformed_action, "\"action_input\" is missing"};
    const auto name = trim(obj["action"].get<std::string>());
    if (name.empty()) return ParseFailure{ParseFailureReason::malformed_action, "\"action\" is empty"};
    const auto& in = obj["action_input"];
    std::string input = in.is_string() ? in.get<std::string>() : in.dump(-1, ' ', false, json::error_handler_t::replace);

    const auto& f = fs[actions.front().fence];
    const std::string before(text.substr(0, f.open));
    const std::string thought = extract_thought(strip_fences(before, fences(before)));

    if (name == "Final Answer") {
        if (has_final_text)
            return ParseFailure{ParseFailureReason::action_and_final_answer, "give either an action or a Final Answer"};
        if (trim(input).empty()) return ParseFailure{ParseFailureReason::empty_final_answer, "Final Answer is empty"};
        return AgentAction::final(thought, input);
    }
    if (has_final_text)
        return ParseFailure{ParseFailureReason::action_and_final_answer, "give either an action or a Final Answer, not both"};
    return AgentAction::call(thought, name, input);
}

std::string render_action(const AgentAction& a) {
    std::string out = "Thought: " + a.thought + "\n";
    if (a.kind == AgentAction::Kind::final_answer) return out + "Final Answer: " + a.answer;
    out += "Action:\n```\n{\n    \"action\": " + json(a.tool_name).dump(-1, ' ', false, json::error_handler_t::replace) + ",\n    \"action_input\": " +
           json(a.tool_input).dump(-1, ' ', false, json::error_handler_t::replace) + "\n}\n```";
    return out;
}

} // namespace mdcrow::agent
