#pragma once

#include "mdcrow/agent/action.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mdcrow::agent {

enum class ToolCategory { information_retrieval, pdb_protein, simulation, analysis, meta };
std::string to_string(ToolCategory c);

// Takes the raw action-input string, returns the observation. Errors are
// thrown; dispatch turns them into "Error: ..." observations.
using ToolHandler = std::function<std::string(const std::string& input)>;

struct ToolSpec {
    std::string name;
    ToolCategory category = ToolCategory::meta;
    std::string description;
    std::string input_contract;
    ToolHandler handler;
};

class Toolset {
public:
    Toolset() = default;
    explicit Toolset(std::vector<ToolSpec> tools);

    // Throws UsageError on a duplicate name or empty description.
    void add(ToolSpec tool);
    const ToolSpec* find(std::string_view name) const;
    std::vector<std::string> names() const;
    const std::vector<ToolSpec>& tools() const { return tools_; }
    std::size_t size() const { return tools_.size(); }

    // Prompt catalog, one block per tool in insertion order.
    std::string catalog() const;

private:
    std::vector<ToolSpec> tools_;
};

struct Dispatch {
    std::string observation;
    bool error = false;
};

Dispatch dispatch_tool(const AgentAction& action, const Toolset& tools);

} // namespace mdcrow::agent
