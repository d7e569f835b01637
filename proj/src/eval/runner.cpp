#include "mdcrow/eval/runner.hpp"

#include "mdcrow/agent/prompt.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/registry/checkpoint.hpp"
#include "mdcrow/service/session.hpp"

#include <regex>

namespace mdcrow::eval {

using nlohmann::json;

namespace {

// Keeps every completion for the transcript.
class TranscriptModel final : public llm::ChatModel {
public:
    explicit TranscriptModel(llm::ChatModel& inner) : inner_(inner) {}
    std::string complete(const std::vector<llm::ChatMessage>& messages) override {
        if (system_.empty() && !messages.empty() && messages.front().role == llm::Role::system)
            system_ = messages.front().content;
        auto text = inner_.complete(messages);
        completions_.push_back(text);
        return text;
    }
    std::string model_id() const override { return inner_.model_id(); }

    const std::vector<std::string>& completions() const { return completions_; }
    const std::string& system_prompt() const { return system_; }

private:
    llm::ChatModel& inner_;
    std::vector<std::string> completions_;
    std::string system_;
};

std::string bundle_name(const TaskSpec& task, Framework f) {
    return "task" + std::to_string(task.task_id) + "__" + to_string(f);
}

GradeRecord grade_template(const TaskSpec& task, Framework f, PromptStyle style, const std::string& model_id,
                           bool runtime_error) {
    GradeRecord g;
    g.task_id = task.task_id;
    g.model_id = model_id;
    g.framework = f;
    g.prompt_style = style;
    for (const auto& s : task.subtasks) g.completed[s.id] = false;
    g.runtime_error = runtime_error;
    g.notes = "template: fill in completed, accuracy and hallucination";
    return g;
}

std::string strip_fences(std::string code) {
    code = trim(code);
    if (code.rfind("```", 0) == 0) {
        auto nl = code.find('\n');
        code = nl == std::string::npos ? std::string() : code.substr(nl + 1);
        auto end = code.rfind("```");
        if (end != std::string::npos) code = code.substr(0, end);
    }
    return code;
}

} // namespace

const std::string& task_prompt(const TaskSpec& task, PromptStyle style) {
    if (style == PromptStyle::ordered && task.prompt_ordered) return *task.prompt_ordered;
    return task.prompt_natural;
}

std::string grading_worksheet(const TaskSpec& task, Framework framework, PromptStyle style,
                              const std::string& model_id, const std::string& run_id) {
    std::string out = "# Grading worksheet: task " + std::to_string(task.task_id) + "\n\n";
    out += "- framework: " + to_string(framework) + "\n";
    out += "- prompt style: " + to_string(style) + "\n";
    out += "- model: " + model_id + "\n";
    out += "- run id: " + (run_id.empty() ? std::string("(none)") : run_id) + "\n\n";
    out += "## Prompt\n\n" + task_prompt(task, style) + "\n\n";
    out += "## Required subtasks\n\n";
    out += "| # | id | description | depends on | completed |\n|---|---|---|---|---|\n";
    int n = 0;
    for (const auto& id : topological_order(task)) {
        const auto* s = task.find(id);
        out += "| " + std::to_string(++n) + " | " + s->id + " | " + s->description + " | " +
               (s->depends_on.empty() ? std::string("-") : join(s->depends_on, ", ")) + " |  |\n";
    }
    out += "\nA subtask whose prerequisite failed counts as incomplete.\n\n";
    out += "## Flags\n\n- accuracy:\n- runtime_error:\n- hallucination:\n- notes:\n";
    return out;
}

std::string combine_code_blocks(const std::string& completion) {
    static const std::regex fence("```[A-Za-z0-9_+-]*[ \\t]*\\n([\\s\\S]*?)```");
    std::string out;
    for (std::sregex_iterator it(completion.begin(), completion.end(), fence), end; it != end; ++it) {
        std::string block = (*it)[1].str();
        if (!block.empty() && block.back() != '\n') block += '\n';
        if (!out.empty()) out += "\n";
        out += block;
    }
    return out;
}

agent::Toolset interpreter_toolset(const SandboxConfig& sandbox) {
    agent::Toolset set;
    set.add({"PythonREPL", agent::ToolCategory::meta,
             "A Python shell. Use this to execute python commands. Input should be a valid python command. "
             "If you want to see the output of a value, you should print it out with `print(...)`.",
             "python source code", [sandbox](const std::string& input) {
                 const auto code = strip_fences(input);
                 if (code.empty()) throw UsageError("empty code snippet");
                 return sandbox_observation(run_snippet(code, sandbox), sandbox);
             }});
    return set;
}

TaskRunOutput run_task(const TaskSpec& task, Framework framework, llm::ChatModel& model, const RunTaskConfig& config) {
    if (config.out_dir.empty()) throw UsageError("run_task needs an output directory");
    TaskRunOutput out;
    out.task_id = task.task_id;
    out.framework = framework;
    out.bundle_dir = config.out_dir / bundle_name(task, framework);
    fs::create_directories(out.bundle_dir);
    const fs::path ck_root = config.checkpoint_root.empty() ? config.out_dir / "checkpoints" : config.checkpoint_root;
    const fs::path work = out.bundle_dir / "work";
    fs::create_directories(work);

    SystemClock system_clock;
    RandomIdSource random_ids;
    Clock& clock = config.clock ? *config.clock : system_clock;
    IdSource& ids = config.ids ? *config.ids : random_ids;

    const std::string& prompt = task_prompt(task, config.style);
    TranscriptModel recorder(model);
    agent::AgentTrace trace;
    trace.user_input = prompt;
    std::string script_file;

    try {
        switch (framework) {
        case Framework::mdcrow: {
            service::RunEnvironment env;
            env.checkpoint_root = ck_root;
            env.work_root = work;
            env.model = &recorder;
            env.clock = &clock;
            env.ids = &ids;
            env.agent = config.agent;
            env.llm_summary = false;
            auto r = service::run_session({prompt, std::nullopt}, env);
            trace = r.trace;
            out.run_id = r.run_id;
            break;
        }
        case Framework::single_query: {
            registry::FileRegistry files(work);
            std::vector<llm::ChatMessage> messages{{llm::Role::system, agent::direct_llm_prompt()},
                                                   {llm::Role::user, prompt}};
            try {
                const auto text = recorder.complete(messages);
                trace.final_text = text;
                trace.outcome = agent::Outcome::final_answer;
                const auto script = combine_code_blocks(text);
                if (!script.empty()) {
                    const auto path = files.new_path("combined_script", ".py");
                    write_file(path.string(), script);
                    auto e = files.register_file(path, "combined script emitted by the model (not executed)",
                                                 registry::FileKind::script, 1);
                    script_file = e.file_id;
                }
            } catch (const std::exception& e) {
                trace.outcome = agent::Outcome::unrecoverable_error;
                trace.error = std::string("language model failure: ") + e.what();
            }
            registry::RunCheckpoint cp;
            cp.trace = trace;
            cp.files = files.entries();
            cp.summary = registry::summarize_run(trace, cp.files, nullptr);
            out.run_id = registry::save_checkpoint(cp, ck_root, ids, clock);
            break;
        }
        case Framework::react_interpreter: {
            registry::FileRegistry files(work);
            SandboxConfig sandbox = config.sandbox;
            if (sandbox.work_dir.empty()) sandbox.work_dir = work / "sandbox";
            const auto tools = interpreter_toolset(sandbox);
            agent::AgentConfig ac = config.agent;
            ac.prompt_template = agent::react_python_prompt_template();
            trace = agent::run_agent(prompt, std::nullopt, tools, recorder, files, clock, ac);
            registry::RunCheckpoint cp;
            cp.trace = trace;
            cp.files = files.entries();
            cp.summary = registry::summarize_run(trace, cp.files, nullptr);
            out.run_id = registry::save_checkpoint(cp, ck_root, ids, clock);
            break;
        }
        }
        out.outcome = to_string(trace.outcome);
        out.runtime_error = trace.outcome == agent::Outcome::unrecoverable_error;
        out.error = trace.error;
    } catch (const std::exception& e) {
        out.outcome = "crashed";
        out.runtime_error = true;
        out.error = e.what();
    }
    out.completions = recorder.completions().size();

    json t;
    t["schema"] = kTranscriptSchema;
    t["task_id"] = task.task_id;
    t["framework"] = to_string(framework);
    t["prompt_style"] = to_string(config.style);
    t["model_id"] = model.model_id();
    t["prompt"] = prompt;
    t["system_prompt"] = recorder.system_prompt();
    t["run_id"] = out.run_id;
    t["outcome"] = out.outcome;
    t["runtime_error"] = out.runtime_error;
    t["error"] = out.error;
    t["completions"] = recorder.completions();
    t["trace"] = agent::to_json(trace);
    if (!script_file.empty()) t["script_file"] = script_file;

    out.transcript = out.bundle_dir / "transcript.json";
    write_file(out.transcript.string(), t.dump(2, ' ', false, json::error_handler_t::replace) + "\n");
    out.worksheet = out.bundle_dir / "worksheet.md";
    write_file(out.worksheet.string(),
               grading_worksheet(task, framework, config.style, model.model_id(), out.run_id));
    out.grade_template = out.bundle_dir / "grade_template.json";
    write_file(out.grade_template.string(),
               grade_to_json(grade_template(task, framework, config.style, model.model_id(), out.runtime_error)));
    return out;
}

nlohmann::json batch_index(const std::vector<BatchEntry>& entries, Framework framework, PromptStyle style) {
    json idx;
    idx["schema"] = "mdcrow.eval-index/1";
    idx["framework"] = to_string(framework);
    idx["prompt_style"] = to_string(style);
    idx["tasks"] = json::array();
    for (const auto& e : entries) {
        json j;
        j["task_id"] = e.task_id;
        j["status"] = e.ok ? "ok" : "failed";
        if (!e.error.empty()) j["error"] = e.error;
        if (e.ok) {
            j["run_id"] = e.output.run_id;
            j["outcome"] = e.output.outcome;
            j["runtime_error"] = e.output.runtime_error;
            j["completions"] = e.output.completions;
            j["transcript"] = (e.output.bundle_dir.filename() / "transcript.json").generic_string();
            j["worksheet"] = (e.output.bundle_dir.filename() / "worksheet.md").generic_string();
        }
        idx["tasks"].push_back(j);
    }
    return idx;
}

std::vector<BatchEntry> run_batch(const std::vector<TaskSpec>& tasks, Framework framework,
                                  const ModelFactory& models, const RunTaskConfig& config) {
    if (config.out_dir.empty()) throw UsageError("run_batch needs an output directory");
    fs::create_directories(config.out_dir);
    std::vector<BatchEntry> entries;
    for (const auto& task : tasks) {
        BatchEntry e;
        e.task_id = task.task_id;
        try {
            auto model = models(task);
            if (!model) throw UsageError("no model for task " + std::to_string(task.task_id));
            e.output = run_task(task, framework, *model, config);
            e.ok = true;
            if (e.output.runtime_error) e.error = e.output.error;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        entries.push_back(std::move(e));
        // Rewritten after each task so a killed batch still leaves an index.
        write_file((config.out_dir / "index.json").string(),
                   batch_index(entries, framework, config.style).dump(2) + "\n");
    }
    return entries;
}

} // namespace mdcrow::eval
