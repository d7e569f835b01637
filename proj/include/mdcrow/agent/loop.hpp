#pragma once

#include "mdcrow/agent/prompt.hpp"
#include "mdcrow/agent/tool.hpp"
#include "mdcrow/agent/trace.hpp"
#include "mdcrow/common/clock.hpp"
#include "mdcrow/llm/gateway.hpp"
#include "mdcrow/registry/registry.hpp"

#include <functional>
#include <optional>
#include <string>

namespace mdcrow::agent {

struct AgentConfig {
    int step_budget = 40;
    int parse_retries = 2;  // format reminders per step before giving up
    std::size_t observation_limit = 4000;
    std::size_t listing_entries = 30;
    std::string prompt_template;  // empty: the MDCrow template
};

struct AgentHooks {
    std::function<void(const TraceStep&)> on_step;
    std::function<void(const ParseFailureRecord&)> on_parse_failure;
};

// Observation as injected into the prompt.
std::string truncate_observation(const std::string& text, std::size_t limit);

AgentTrace run_agent(const std::string& user_input, const std::optional<std::string>& context, const Toolset& tools,
                     llm::ChatModel& model, registry::FileRegistry& files, Clock& clock,
                     const AgentConfig& config = {}, const AgentHooks& hooks = {});

} // namespace mdcrow::agent
