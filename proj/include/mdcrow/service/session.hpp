#pragma once

#include "mdcrow/agent/loop.hpp"
#include "mdcrow/registry/checkpoint.hpp"
#include "mdcrow/sim/script.hpp"
#include "mdcrow/tools/toolset.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace mdcrow::service {

namespace fs = std::filesystem;

struct RunRequest {
    std::string prompt;
    std::optional<std::string> resume_from;  // prior run id under the checkpoint root
};

using ContextFactory =
    std::function<tools::ToolContext(registry::FileRegistry&, sim::EngineAdapter&, llm::ChatModel*)>;

struct RunEnvironment {
    fs::path checkpoint_root;
    fs::path work_root;  // per-run scratch dirs live here as <work_root>/<run_id>
    llm::ChatModel* model = nullptr;
    sim::EngineAdapter* engine = nullptr;  // null: a fresh ToyEngine
    Clock* clock = nullptr;                // null: system clock
    IdSource* ids = nullptr;               // null: random ids
    agent::AgentConfig agent;
    bool llm_summary = true;  // ask the model for the run summary
    ContextFactory make_context;  // null: fixture_context
    // Extra tools or a replacement set; null: build_toolset.
    std::function<agent::Toolset(tools::ToolContext&)> make_toolset;
};

struct SessionHooks {
    std::function<void(const std::string& run_id)> on_start;
    // Called once before the first step of a resumed run.
    std::function<void(const registry::RunSummary& prior)> on_resume;
    std::function<void(const agent::TraceStep&)> on_step;
};

struct RunResult {
    std::string run_id;
    std::optional<std::string> parent_run;
    std::optional<registry::RunSummary> prior_summary;
    agent::AgentTrace trace;
    std::vector<registry::FileEntry> files;
    registry::RunSummary summary;
};

// Prompt context handed to the agent when resuming.
std::string resume_context(const registry::ResumeContext& prior);

// Runs the agent once, checkpointing after every step and at the end.
RunResult run_session(const RunRequest& request, const RunEnvironment& env, const SessionHooks& hooks = {});

} // namespace mdcrow::service
