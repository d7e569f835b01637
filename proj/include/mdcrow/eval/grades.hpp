#pragma once

#include "mdcrow/eval/tasks.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mdcrow::eval {

enum class Framework { mdcrow, single_query, react_interpreter };
enum class PromptStyle { natural, ordered };

std::string to_string(Framework f);
std::string to_string(PromptStyle p);
Framework parse_framework(std::string_view s);
PromptStyle parse_prompt_style(std::string_view s);

struct GradeRecord {
    int task_id = 0;
    std::string model_id;
    Framework framework = Framework::mdcrow;
    PromptStyle prompt_style = PromptStyle::natural;
    std::map<std::string, bool> completed;  // subtask id -> completed
    bool accuracy = false;
    bool runtime_error = false;
    bool hallucination = false;
    std::string grader;
    std::string notes;
    friend bool operator==(const GradeRecord&, const GradeRecord&) = default;
};

inline constexpr const char* kGradeSchema = "mdcrow.grade/1";

std::string grade_to_json(const GradeRecord& g);
GradeRecord grade_from_json(std::string_view text);

// One file per record; returns the path written.
std::filesystem::path save_grade(const GradeRecord& g, const std::filesystem::path& dir);
// Every *.json in the directory, sorted by file name.
std::vector<GradeRecord> load_grades(const std::filesystem::path& dir);

// Throws UsageError unless `completed` covers exactly the task's subtasks.
void check_grade(const GradeRecord& g, const TaskSpec& task);

// Marks incomplete every subtask with an incomplete prerequisite anywhere
// in its dependency closure.
std::map<std::string, bool> apply_cascade(const GradeRecord& g, const TaskSpec& task);

double completion_fraction(const GradeRecord& g, const TaskSpec& task);

using ConfigKey = std::pair<std::string, Framework>;  // (model, framework)

// Percentage of accurate grades per configuration.
std::map<ConfigKey, double> aggregate_accuracy(const std::vector<GradeRecord>& grades);

struct RobustnessEntry {
    std::string model_id;
    PromptStyle style = PromptStyle::natural;
    std::vector<int> task_ids;
    std::vector<double> completion_pct;  // per ladder task, in task-id order
    double mean = 0.0;
    double sd = 0.0;                      // population
    std::optional<double> cv;             // absent when mean == 0
};

using RobustnessReport = std::vector<RobustnessEntry>;

// Requires exactly one grade per ladder task for every (model, style).
RobustnessReport robustness_cv(const std::vector<GradeRecord>& grades, const std::vector<TaskSpec>& ladder);

} // namespace mdcrow::eval
