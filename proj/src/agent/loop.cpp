#include "mdcrow/agent/loop.hpp"

#include "mdcrow/common/error.hpp"

namespace mdcrow::agent {

std::string truncate_observation(const std::string& text, std::size_t limit) {
    if (text.size() <= limit) return text;
    return text.substr(0, limit) + "\n[truncated]";
}

namespace {

std::string listing_block(const registry::FileRegistry& files, std::size_t n) {
    return "Registered files:\n" + files.compact_listing(n);
}

} // namespace

AgentTrace run_agent(const std::string& user_input, const std::optional<std::string>& context, const Toolset& tools,
                     llm::ChatModel& model, registry::FileRegistry& files, Clock& clock, const AgentConfig& config,
                     const AgentHooks& hooks) {
    if (config.step_budget < 1) throw UsageError("step budget must be >= 1");

    AgentTrace trace;
    trace.user_input = user_input;
    trace.context = context.value_or("");

    std::vector<llm::ChatMessage> messages{
        {llm::Role::system, config.prompt_template.empty()
                                 ? render_system_prompt(context, user_input, tools)
                                 : render_prompt(config.prompt_template, context, user_input, tools)},
        {llm::Role::user, listing_block(files, config.listing_entries) +
                              "\n\nBegin. Respond with your first Thought and Action, or a Final Answer."}};

    for (int step = 1; step <= config.step_budget; ++step) {
        const double t0 = clock.now_seconds();
        std::optional<AgentAction> action;
        std::string raw;
        for (int attempt = 0; attempt <= config.parse_retries; ++attempt) {
            try {
                raw = model.complete(messages);
            } catch (const std::exception& e) {
                trace.outcome = Outcome::unrecoverable_error;
                trace.error = std::string("language model failure at step ") + std::to_string(step) + ": " + e.what();
                return trace;
            }
            auto parsed = parse_llm_output(raw);
            if (auto* a = std::get_if<AgentAction>(&parsed)) {
                action = *a;
                break;
            }
            const auto& failure = std::get<ParseFailure>(parsed);
            ParseFailureRecord rec{step, attempt + 1, to_string(failure.reason), failure.detail, raw};
            trace.parse_failures.push_back(rec);
            if (hooks.on_parse_failure) hooks.on_parse_failure(rec);
            messages.push_back({llm::Role::assistant, raw.empty() ? std::string("(empty response)") : raw});
            messages.push_back({llm::Role::user, format_reminder(failure)});
        }
        if (!action) {
            trace.outcome = Outcome::unrecoverable_error;
            trace.error = "step " + std::to_string(step) + ": " + std::to_string(config.parse_retries + 1) +
                          " consecutive responses could not be parsed";
            return trace;
        }

        TraceStep st;
        st.index = step;
        st.action = *action;
        messages.push_back({llm::Role::assistant, raw});

        if (action->kind == AgentAction::Kind::final_answer) {
            st.wall_time = clock.now_seconds() - t0;
            trace.steps.push_back(st);
            trace.outcome = Outcome::final_answer;
            trace.final_text = action->answer;
            if (hooks.on_step) hooks.on_step(trace.steps.back());
            return trace;
        }

        files.set_step(step);
        auto d = dispatch_tool(*action, tools);
        st.observation = d.observation;
        st.error = d.error;
        st.wall_time = clock.now_seconds() - t0;
        trace.steps.push_back(st);
        if (hooks.on_step) hooks.on_step(trace.steps.back());

        messages.push_back({llm::Role::user, "Observation: " + truncate_observation(d.observation, config.observation_limit) +
                                                 "\n\n" + listing_block(files, config.listing_entries)});
    }
    trace.outcome = Outcome::step_budget_exhausted;
    trace.final_text = "Stopped after " + std::to_string(config.step_budget) + " steps without a final answer.";
    return trace;
}

} // namespace mdcrow::agent
