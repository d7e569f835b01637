#include "mdcrow/agent/trace.hpp"

#include "mdcrow/common/error.hpp"

namespace mdcrow::agent {

using nlohmann::json;

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::running: return "running";
        case Outcome::final_answer: return "final_answer";
        case Outcome::step_budget_exhausted: return "step_budget_exhausted";
        case Outcome::unrecoverable_error: return "unrecoverable_error";
    }
    return "running";
}

Outcome parse_outcome(std::string_view s) {
    if (s == "running") return Outcome::running;
    if (s == "final_answer") return Outcome::final_answer;
    if (s == "step_budget_exhausted") return Outcome::step_budget_exhausted;
    if (s == "unrecoverable_error") return Outcome::unrecoverable_error;
    throw ParseError("unknown trace outcome '" + std::string(s) + "'");
}

json to_json(const TraceStep& s) {
    json j{{"index", s.index},
           {"thought", s.action.thought},
           {"kind", to_string(s.action.kind)},
           {"observation", s.observation},
           {"wall_time", s.wall_time},
           {"error", s.error}};
    if (s.action.kind == AgentAction::Kind::tool_call) {
        j["tool_name"] = s.action.tool_name;
        j["tool_input"] = s.action.tool_input;
    } else {
        j["answer"] = s.action.answer;
    }
    return j;
}

json to_json(const AgentTrace& t) {
    json steps = json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s));
    json failures = json::array();
    for (const auto& f : t.parse_failures)
        failures.push_back({{"step", f.step}, {"attempt", f.attempt}, {"reason", f.reason}, {"detail", f.detail},
                            {"raw", f.raw}});
    return json{{"user_input", t.user_input}, {"context", t.context},       {"steps", steps},
                {"outcome", to_string(t.outcome)}, {"final_text", t.final_text}, {"error", t.error},
                {"parse_failures", failures}};
}

AgentTrace trace_from_json(const json& j) {
    try {
        AgentTrace t;
        t.user_input = j.at("user_input").get<std::string>();
        t.context = j.at("context").get<std::string>();
        t.outcome = parse_outcome(j.at("outcome").get<std::string>());
        t.final_text = j.at("final_text").get<std::string>();
        t.error = j.value("error", std::string());
        for (const auto& s : j.at("steps")) {
            TraceStep st;
            st.index = s.at("index").get<int>();
            st.observation = s.at("observation").get<std::string>();
            st.wall_time = s.at("wall_time").get<double>();
            st.error = s.at("error").get<bool>();
            const auto kind = s.at("kind").get<std::string>();
            if (kind == "tool_call") {
                st.action = AgentAction::call(s.at("thought").get<std::string>(), s.at("tool_name").get<std::string>(),
                                              s.at("tool_input").get<std::string>());
            } else if (kind == "final_answer") {
                st.action = AgentAction::final(s.at("thought").get<std::string>(), s.at("answer").get<std::string>());
            } else {
                throw ParseError("unknown step kind '" + kind + "'");
            }
            t.steps.push_back(std::move(st));
        }
        for (const auto& f : j.value("parse_failures", json::array()))
            t.parse_failures.push_back({f.at("step").get<int>(), f.at("attempt").get<int>(),
                                        f.at("reason").get<std::string>(), f.at("detail").get<std::string>(),
                                        f.at("raw").get<std::string>()});
        return t;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed trace: ") + e.what());
    }
}

} // namespace mdcrow::agent
