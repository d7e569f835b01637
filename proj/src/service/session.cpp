#include "mdcrow/service/session.hpp"

#include "mdcrow/common/error.hpp"

#include <algorithm>
#include <memory>

namespace mdcrow::service {

std::string resume_context(const registry::ResumeContext& prior) {
    std::string out = "Summary of previous run " + prior.checkpoint.run_id + ":\n" + prior.checkpoint.summary.text;
    out += "\n\nFiles carried over from that run:\n";
    out += prior.registry.size() ? prior.registry.describe_all() : std::string("(none)\n");
    if (!prior.missing.empty()) {
        out += "Missing payloads (cannot be used): ";
        for (size_t i = 0; i < prior.missing.size(); ++i) out += (i ? ", " : "") + prior.missing[i];
        out += "\n";
    }
    return out;
}

namespace {

std::vector<registry::FileEntry> checkpoint_paths(std::vector<registry::FileEntry> files, const fs::path& root,
                                                  const std::string& run_id) {
    for (auto& e : files)
        e.path = (root / run_id / "files" / (e.file_id + "__" + fs::path(e.path).filename().string())).string();
    return files;
}

} // namespace

RunResult run_session(const RunRequest& request, const RunEnvironment& env, const SessionHooks& hooks) {
    if (!env.model) throw UsageError("run_session needs a language model");
    if (env.checkpoint_root.empty() || env.work_root.empty())
        throw UsageError("run_session needs a checkpoint root and a work root");

    SystemClock system_clock;
    RandomIdSource random_ids;
    Clock& clock = env.clock ? *env.clock : system_clock;
    IdSource& ids = env.ids ? *env.ids : random_ids;
    std::unique_ptr<sim::ToyEngine> own_engine;
    sim::EngineAdapter* engine = env.engine;
    if (!engine) {
        own_engine = std::make_unique<sim::ToyEngine>();
        engine = own_engine.get();
    }

    if (request.resume_from) {
        const auto known = registry::list_checkpoints(env.checkpoint_root);
        if (std::find(known.begin(), known.end(), *request.resume_from) == known.end())
            throw NotFoundError("unknown run id '" + *request.resume_from + "' under " +
                                env.checkpoint_root.string());
    }

    registry::RunCheckpoint cp;
    cp.parent_run = request.resume_from;
    cp.created = clock.iso_timestamp();
    cp.trace.user_input = request.prompt;
    cp.run_id = registry::save_checkpoint(cp, env.checkpoint_root, ids, clock);

    RunResult result;
    result.run_id = cp.run_id;
    result.parent_run = cp.parent_run;
    if (hooks.on_start) hooks.on_start(cp.run_id);

    const fs::path work_dir = env.work_root / cp.run_id;
    fs::create_directories(work_dir);

    std::optional<std::string> context;
    std::optional<registry::FileRegistry> files;
    if (request.resume_from) {
        auto prior = registry::load_checkpoint(env.checkpoint_root, *request.resume_from, work_dir);
        context = resume_context(prior);
        result.prior_summary = prior.checkpoint.summary;
        files.emplace(prior.registry);
        cp.trace.context = *context;
    } else {
        files.emplace(work_dir);
    }

    tools::ToolContext ctx = env.make_context ? env.make_context(*files, *engine, env.model)
                                              : tools::fixture_context(*files, *engine, env.model);
    const agent::Toolset toolset = env.make_toolset ? env.make_toolset(ctx) : tools::build_toolset(ctx);

    if (result.prior_summary && hooks.on_resume) hooks.on_resume(*result.prior_summary);

    // Partial checkpoint after each step so an interrupted run stays loadable.
    agent::AgentHooks agent_hooks;
    agent_hooks.on_step = [&](const agent::TraceStep& step) {
        cp.trace.steps.push_back(step);
        cp.files = files->entries();
        registry::save_checkpoint(cp, env.checkpoint_root, ids, clock);
        if (hooks.on_step) hooks.on_step(step);
    };

    auto trace = agent::run_agent(request.prompt, context, toolset, *env.model, *files, clock, env.agent, agent_hooks);

    cp.trace = trace;
    cp.files = files->entries();
    cp.summary = registry::summarize_run(trace, cp.files, env.llm_summary ? env.model : nullptr);
    registry::save_checkpoint(cp, env.checkpoint_root, ids, clock);

    result.trace = std::move(trace);
    result.summary = cp.summary;
    result.files = checkpoint_paths(cp.files, env.checkpoint_root, cp.run_id);
    return result;
}

} // namespace mdcrow::service
