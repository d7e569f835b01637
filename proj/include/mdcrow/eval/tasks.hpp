#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::eval {

struct Subtask {
    std::string id;
    std::string description;
    std::vector<std::string> depends_on;
    friend bool operator==(const Subtask&, const Subtask&) = default;
};

struct TaskSpec {
    int task_id = 0;
    std::string prompt_natural;
    std::optional<std::string> prompt_ordered;
    std::vector<Subtask> subtasks;
    std::string notes;

    int complexity() const { return static_cast<int>(subtasks.size()); }
    const Subtask* find(std::string_view id) const;
    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

inline constexpr const char* kTaskSchema = "mdcrow.tasks/1";

// Throws ParseError on schema violations, duplicate ids, unknown
// dependencies, cycles, complexity outside [1, 10] or a declared
// "complexity" that disagrees with the subtask count.
std::vector<TaskSpec> parse_tasks(std::string_view json_text);
std::vector<TaskSpec> load_tasks(const std::string& path);
std::string tasks_to_json(const std::vector<TaskSpec>& tasks);

const TaskSpec& find_task(const std::vector<TaskSpec>& tasks, int task_id);

// Subtask ids in a dependency-respecting order (stable w.r.t. file order).
std::vector<std::string> topological_order(const TaskSpec& task);

} // namespace mdcrow::eval
