#pragma once

#include "mdcrow/agent/loop.hpp"
#include "mdcrow/eval/grades.hpp"
#include "mdcrow/eval/sandbox.hpp"
#include "mdcrow/eval/tasks.hpp"
#include "mdcrow/llm/gateway.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace mdcrow::eval {

namespace fs = std::filesystem;

struct RunTaskConfig {
    PromptStyle style = PromptStyle::natural;
    fs::path out_dir;          // <out_dir>/task<N>__<framework>/ receives the bundle
    fs::path checkpoint_root;  // empty: <out_dir>/checkpoints
    agent::AgentConfig agent;
    SandboxConfig sandbox;     // react_interpreter only; work_dir defaults inside the bundle
    Clock* clock = nullptr;
    IdSource* ids = nullptr;
};

struct TaskRunOutput {
    int task_id = 0;
    Framework framework = Framework::mdcrow;
    fs::path bundle_dir;
    fs::path transcript;
    fs::path worksheet;
    fs::path grade_template;
    std::string run_id;
    std::string outcome;      // agent outcome, or "completed"/"crashed" for single_query
    bool runtime_error = false;
    std::string error;
    std::size_t completions = 0;  // language-model calls made
};

inline constexpr const char* kTranscriptSchema = "mdcrow.transcript/1";

// Prompt text for the chosen style; ordered falls back to natural when absent.
const std::string& task_prompt(const TaskSpec& task, PromptStyle style);

// Markdown worksheet for the human grader, subtasks in dependency order.
std::string grading_worksheet(const TaskSpec& task, Framework framework, PromptStyle style,
                              const std::string& model_id, const std::string& run_id);

// Fenced code blocks of a completion joined into one script.
std::string combine_code_blocks(const std::string& completion);

// Only the sandboxed PythonREPL tool.
agent::Toolset interpreter_toolset(const SandboxConfig& sandbox);

TaskRunOutput run_task(const TaskSpec& task, Framework framework, llm::ChatModel& model, const RunTaskConfig& config);

using ModelFactory = std::function<std::shared_ptr<llm::ChatModel>(const TaskSpec&)>;

struct BatchEntry {
    int task_id = 0;
    bool ok = false;  // run_task returned (runtime errors inside the run still count as ok)
    std::string error;
    TaskRunOutput output;
};

// Runs every task; a failing task is recorded in the index and the batch
// continues. Writes <out_dir>/index.json.
std::vector<BatchEntry> run_batch(const std::vector<TaskSpec>& tasks, Framework framework,
                                  const ModelFactory& models, const RunTaskConfig& config);

nlohmann::json batch_index(const std::vector<BatchEntry>& entries, Framework framework, PromptStyle style);

} // namespace mdcrow::eval
