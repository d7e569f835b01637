#pragma once

#include "mdcrow/agent/tool.hpp"

#include <optional>
#include <string>

namespace mdcrow::agent {

// Agent system prompt with the tool catalog, context and question filled in.
std::string render_system_prompt(const std::optional<std::string>& context, const std::string& user_input,
                                 const Toolset& tools);

// Same, for any template with {context}/{input} slots.
std::string render_prompt(const std::string& tmpl, const std::optional<std::string>& context,
                          const std::string& user_input, const Toolset& tools);

// Verbatim templates ({context} and {input} are the slots).
const std::string& mdcrow_prompt_template();
const std::string& direct_llm_prompt();
const std::string& react_python_prompt_template();

std::string format_reminder(const ParseFailure& failure);

} // namespace mdcrow::agent
