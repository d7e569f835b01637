#include "mdcrow/agent/tool.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

namespace mdcrow::agent {

std::string to_string(ToolCategory c) {
    switch (c) {
        case ToolCategory::information_retrieval: return "information_retrieval";
        case ToolCategory::pdb_protein: return "pdb_protein";
        case ToolCategory::simulation: return "simulation";
        case ToolCategory::analysis: return "analysis";
        case ToolCategory::meta: return "meta";
    }
    return "meta";
}

Toolset::Toolset(std::vector<ToolSpec> tools) {
    for (auto& t : tools) add(std::move(t));
}

void Toolset::add(ToolSpec tool) {
    if (tool.name.empty()) throw UsageError("tool name must not be empty");
    if (trim(tool.description).empty()) throw UsageError("tool " + tool.name + " has an empty description");
    if (!tool.handler) throw UsageError("tool " + tool.name + " has no handler");
    if (find(tool.name)) throw UsageError("duplicate tool name " + tool.name);
    tools_.push_back(std::move(tool));
}

const ToolSpec* Toolset::find(std::string_view name) const {
    for (const auto& t : tools_)
        if (t.name == name) return &t;
    return nullptr;
}

std::vector<std::string> Toolset::names() const {
    std::vector<std::string> n;
    for (const auto& t : tools_) n.push_back(t.name);
    return n;
}

std::string Toolset::catalog() const {
    std::string out;
    for (const auto& t : tools_) {
        out += t.name + ": " + t.description + "\n";
        if (!t.input_contract.empty()) out += "    Input: " + t.input_contract + "\n";
    }
    return out;
}

Dispatch dispatch_tool(const AgentAction& action, const Toolset& tools) {
    if (action.kind != AgentAction::Kind::tool_call) throw UsageError("dispatch_tool needs a tool call");
    const auto* tool = tools.find(action.tool_name);
    if (!tool)
        return {"Error: tool not found: '" + action.tool_name + "'. Valid tools: " + join(tools.names(), ", "), true};
    try {
        return {tool->handler(action.tool_input), false};
    } catch (const std::exception& e) {
        return {std::string("Error: ") + e.what(), true};
    } catch (...) {
        return {"Error: tool " + tool->name + " failed with an unknown exception", true};
    }
}

} // namespace mdcrow::agent
