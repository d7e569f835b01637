#include "mdcrow/eval/tasks.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <json.hpp>

#include <map>
#include <set>

namespace mdcrow::eval {

using nlohmann::json;

const Subtask* TaskSpec::find(std::string_view id) const {
    for (const auto& s : subtasks)
        if (s.id == id) return &s;
    return nullptr;
}

std::vector<std::string> topological_order(const TaskSpec& task) {
    std::vector<std::string> order;
    std::set<std::string> done;
    // Kahn's algorithm, picking the earliest ready subtask each round.
    while (order.size() < task.subtasks.size()) {
        bool progressed = false;
        for (const auto& s : task.subtasks) {
            if (done.count(s.id)) continue;
            bool ready = true;
            for (const auto& d : s.depends_on)
                if (!done.count(d)) ready = false;
            if (!ready) continue;
            order.push_back(s.id);
            done.insert(s.id);
            progressed = true;
            break;
        }
        if (!progressed)
            throw ParseError("task " + std::to_string(task.task_id) + " has a dependency cycle among its subtasks");
    }
    return order;
}

namespace {

void check_task(const TaskSpec& t) {
    const std::string where = "task " + std::to_string(t.task_id);
    if (trim(t.prompt_natural).empty()) throw ParseError(where + " has an empty prompt");
    if (t.complexity() < 1 || t.complexity() > 10)
        throw ParseError(where + " has " + std::to_string(t.complexity()) + " subtasks; allowed range is 1 to 10");
    std::set<std::string> ids;
    for (const auto& s : t.subtasks) {
        if (s.id.empty()) throw ParseError(where + " has a subtask without id");
        if (!ids.insert(s.id).second) throw ParseError(where + " has duplicate subtask id '" + s.id + "'");
    }
    for (const auto& s : t.subtasks)
        for (const auto& d : s.depends_on) {
            if (!ids.count(d))
                throw ParseError(where + ": subtask '" + s.id + "' depends on unknown subtask '" + d + "'");
            if (d == s.id) throw ParseError(where + ": subtask '" + s.id + "' depends on itself");
        }
    topological_order(t);
}

} // namespace

std::vector<TaskSpec> parse_tasks(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("task file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", "") != kTaskSchema)
        throw ParseError(std::string("task file must declare schema \"") + kTaskSchema + "\"");
    if (!doc.contains("tasks") || !doc["tasks"].is_array()) throw ParseError("task file has no \"tasks\" array");
    std::vector<TaskSpec> out;
    std::set<int> seen;
    try {
        for (const auto& jt : doc["tasks"]) {
            TaskSpec t;
            t.task_id = jt.at("task_id").get<int>();
            if (!seen.insert(t.task_id).second) throw ParseError("duplicate task id " + std::to_string(t.task_id));
            t.prompt_natural = jt.at("prompt_natural").get<std::string>();
            if (jt.contains("prompt_ordered") && !jt["prompt_ordered"].is_null())
                t.prompt_ordered = jt["prompt_ordered"].get<std::string>();
            t.notes = jt.value("notes", "");
            for (const auto& js : jt.at("subtasks")) {
                Subtask s;
                s.id = js.at("id").get<std::string>();
                s.description = js.value("description", "");
                s.depends_on = js.value("depends_on", std::vector<std::string>{});
                t.subtasks.push_back(std::move(s));
            }
            if (jt.contains("complexity") && jt["complexity"].get<int>() != t.complexity())
                throw ParseError("task " + std::to_string(t.task_id) + " declares complexity " +
                                 std::to_string(jt["complexity"].get<int>()) + " but lists " +
                                 std::to_string(t.complexity()) + " subtasks");
            check_task(t);
            out.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("task file schema violation: ") + e.what());
    }
    return out;
}

std::vector<TaskSpec> load_tasks(const std::string& path) { return parse_tasks(read_file(path)); }

std::string tasks_to_json(const std::vector<TaskSpec>& tasks) {
    json arr = json::array();
    for (const auto& t : tasks) {
        json jt{{"task_id", t.task_id}, {"prompt_natural", t.prompt_natural}, {"complexity", t.complexity()}};
        jt["prompt_ordered"] = t.prompt_ordered ? json(*t.prompt_ordered) : json(nullptr);
        json subs = json::array();
        for (const auto& s : t.subtasks)
            subs.push_back({{"id", s.id}, {"description", s.description}, {"depends_on", s.depends_on}});
        jt["subtasks"] = subs;
        if (!t.notes.empty()) jt["notes"] = t.notes;
        arr.push_back(jt);
    }
    return json{{"schema", kTaskSchema}, {"tasks", arr}}.dump(2) + "\n";
}

const TaskSpec& find_task(const std::vector<TaskSpec>& tasks, int task_id) {
    for (const auto& t : tasks)
        if (t.task_id == task_id) return t;
    throw NotFoundError("no task with id " + std::to_string(task_id));
}

} // namespace mdcrow::eval
