#include "mdcrow/eval/grades.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/eval/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace mdcrow::eval {

using nlohmann::json;

std::string to_string(Framework f) {
    switch (f) {
    case Framework::mdcrow: return "mdcrow";
    case Framework::single_query: return "single_query";
    case Framework::react_interpreter: return "react_interpreter";
    }
    return "mdcrow";
}

std::string to_string(PromptStyle p) { return p == PromptStyle::natural ? "natural" : "ordered"; }

Framework parse_framework(std::string_view s) {
    const auto l = to_lower(trim(s));
    if (l == "mdcrow") return Framework::mdcrow;
    if (l == "single_query" || l == "direct" || l == "direct_llm") return Framework::single_query;
    if (l == "react_interpreter" || l == "react" || l == "react_python") return Framework::react_interpreter;
    throw UsageError("unknown framework '" + std::string(s) + "' (mdcrow, single_query, react_interpreter)");
}

PromptStyle parse_prompt_style(std::string_view s) {
    const auto l = to_lower(trim(s));
    if (l == "natural") return PromptStyle::natural;
    if (l == "ordered") return PromptStyle::ordered;
    throw UsageError("unknown prompt style '" + std::string(s) + "' (natural, ordered)");
}

std::string grade_to_json(const GradeRecord& g) {
    json completed = json::object();
    for (const auto& [k, v] : g.completed) completed[k] = v;
    return json{{"schema", kGradeSchema},       {"task_id", g.task_id},
                {"model_id", g.model_id},       {"framework", to_string(g.framework)},
                {"prompt_style", to_string(g.prompt_style)}, {"completed", completed},
                {"accuracy", g.accuracy},       {"runtime_error", g.runtime_error},
                {"hallucination", g.hallucination}, {"grader", g.grader},
                {"notes", g.notes}}
               .dump(2) +
           "\n";
}

GradeRecord grade_from_json(std::string_view text) {
    try {
        const auto j = json::parse(text);
        if (j.value("schema", "") != kGradeSchema)
            throw ParseError(std::string("grade record must declare schema \"") + kGradeSchema + "\"");
        GradeRecord g;
        g.task_id = j.at("task_id").get<int>();
        g.model_id = j.at("model_id").get<std::string>();
        g.framework = parse_framework(j.at("framework").get<std::string>());
        g.prompt_style = parse_prompt_style(j.value("prompt_style", "natural"));
        for (const auto& [k, v] : j.at("completed").items()) g.completed[k] = v.get<bool>();
        g.accuracy = j.at("accuracy").get<bool>();
        g.runtime_error = j.value("runtime_error", false);
        g.hallucination = j.value("hallucination", false);
        g.grader = j.value("grader", "");
        g.notes = j.value("notes", "");
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed grade record: ") + e.what());
    }
}

std::filesystem::path save_grade(const GradeRecord& g, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto name = "task" + std::to_string(g.task_id) + "__" + replace_all(g.model_id, "/", "_") + "__" +
                      to_string(g.framework) + "__" + to_string(g.prompt_style) + ".json";
    const auto path = dir / name;
    write_file(path.string(), grade_to_json(g));
    return path;
}

std::vector<GradeRecord> load_grades(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw NotFoundError("grade directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<GradeRecord> out;
    for (const auto& f : files) {
        try {
            out.push_back(grade_from_json(read_file(f.string())));
        } catch (const ParseError& e) {
            throw ParseError(f.filename().string() + ": " + e.what());
        }
    }
    return out;
}

void check_grade(const GradeRecord& g, const TaskSpec& task) {
    if (g.task_id != task.task_id)
        throw UsageError("grade is for task " + std::to_string(g.task_id) + " but was matched with task " +
                         std::to_string(task.task_id));
    std::set<std::string> ids;
    for (const auto& s : task.subtasks) ids.insert(s.id);
    for (const auto& [k, v] : g.completed)
        if (!ids.count(k))
            throw UsageError("grade for task " + std::to_string(task.task_id) + " names unknown subtask '" + k + "'");
    for (const auto& id : ids)
        if (!g.completed.count(id))
            throw UsageError("grade for task " + std::to_string(task.task_id) + " lacks subtask '" + id + "'");
}

std::map<std::string, bool> apply_cascade(const GradeRecord& g, const TaskSpec& task) {
    check_grade(g, task);
    std::map<std::string, bool> out;
    for (const auto& id : topological_order(task)) {
        const auto* s = task.find(id);
        bool ok = g.completed.at(id);
        for (const auto& d : s->depends_on) ok = ok && out.at(d);
        out[id] = ok;
    }
    return out;
}

double completion_fraction(const GradeRecord& g, const TaskSpec& task) {
    const auto c = apply_cascade(g, task);
    const auto n = std::count_if(c.begin(), c.end(), [](const auto& kv) { return kv.second; });
    return static_cast<double>(n) / static_cast<double>(c.size());
}

std::map<ConfigKey, double> aggregate_accuracy(const std::vector<GradeRecord>& grades) {
    std::map<ConfigKey, std::pair<int, int>> counts;
    for (const auto& g : grades) {
        auto& c = counts[{g.model_id, g.framework}];
        c.first += g.accuracy;
        c.second += 1;
    }
    std::map<ConfigKey, double> out;
    for (const auto& [k, c] : counts) out[k] = 100.0 * c.first / c.second;
    return out;
}

RobustnessReport robustness_cv(const std::vector<GradeRecord>& grades, const std::vector<TaskSpec>& ladder) {
    std::map<std::pair<std::string, PromptStyle>, std::map<int, const GradeRecord*>> by;
    std::set<int> ladder_ids;
    for (const auto& t : ladder) ladder_ids.insert(t.task_id);
    for (const auto& g : grades) {
        if (!ladder_ids.count(g.task_id)) continue;
        auto& slot = by[{g.model_id, g.prompt_style}][g.task_id];
        if (slot)
            throw UsageError("two grades for ladder task " + std::to_string(g.task_id) + " (" + g.model_id + ", " +
                             to_string(g.prompt_style) + ")");
        slot = &g;
    }
    RobustnessReport out;
    for (const auto& [key, per_task] : by) {
        RobustnessEntry e;
        e.model_id = key.first;
        e.style = key.second;
        for (const auto& t : ladder) {
            auto it = per_task.find(t.task_id);
            if (it == per_task.end())
                throw UsageError("no grade for ladder task " + std::to_string(t.task_id) + " (" + e.model_id + ", " +
                                 to_string(e.style) + ")");
            e.task_ids.push_back(t.task_id);
            e.completion_pct.push_back(100.0 * completion_fraction(*it->second, t));
        }
        e.mean = mean(e.completion_pct);
        e.sd = population_sd(e.completion_pct);
        e.cv = coefficient_of_variation(e.completion_pct);
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace mdcrow::eval
