#include "mdcrow/eval/report.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/image/plot.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mdcrow::eval {

namespace fs = std::filesystem;

namespace {

std::string num(double v) { return std::isfinite(v) ? format_number(v) : std::string("nan"); }

const TaskSpec& task_of(const GradeRecord& g, const std::vector<TaskSpec>& tasks) {
    const auto& t = find_task(tasks, g.task_id);
    check_grade(g, t);
    return t;
}

std::string config_name(const std::string& model, Framework f) { return model + " / " + to_string(f); }

} // namespace

std::vector<ComplexityCorrelation> complexity_correlations(const std::vector<GradeRecord>& grades,
                                                           const std::vector<TaskSpec>& tasks) {
    std::map<ConfigKey, std::vector<const GradeRecord*>> by;
    for (const auto& g : grades) by[{g.model_id, g.framework}].push_back(&g);
    std::vector<ComplexityCorrelation> out;
    for (const auto& [key, list] : by) {
        std::vector<double> cx, acc, comp;
        std::set<double> distinct;
        for (const auto* g : list) {
            const auto& t = task_of(*g, tasks);
            cx.push_back(t.complexity());
            distinct.insert(t.complexity());
            acc.push_back(g->accuracy ? 1.0 : 0.0);
            comp.push_back(completion_fraction(*g, t));
        }
        if (distinct.size() < 3) continue;
        ComplexityCorrelation c;
        c.model_id = key.first;
        c.framework = key.second;
        c.n = cx.size();
        c.accuracy = spearman(cx, acc);
        c.completion = spearman(cx, comp);
        out.push_back(c);
    }
    return out;
}

std::vector<StyleComparison> style_comparisons(const std::vector<GradeRecord>& ladder_grades,
                                               const std::vector<TaskSpec>& ladder, const TTestOptions& options) {
    std::map<std::string, std::map<PromptStyle, std::vector<double>>> by;
    for (const auto& g : ladder_grades)
        by[g.model_id][g.prompt_style].push_back(completion_fraction(g, task_of(g, ladder)));
    std::vector<StyleComparison> out;
    for (const auto& [model, styles] : by) {
        auto n = styles.find(PromptStyle::natural);
        auto o = styles.find(PromptStyle::ordered);
        if (n == styles.end() || o == styles.end() || n->second.size() < 2 || o->second.size() < 2) continue;
        out.push_back({model, two_sample_t_test(n->second, o->second, options)});
    }
    return out;
}

std::vector<fs::path> write_report(const std::vector<GradeRecord>& grades, const std::vector<TaskSpec>& tasks,
                                   const std::vector<GradeRecord>& ladder_grades, const std::vector<TaskSpec>& ladder,
                                   const fs::path& out_dir, const ReportOptions& options) {
    if (grades.empty() && ladder_grades.empty()) throw UsageError("no grades to report");
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto p = out_dir / name;
        write_file(p.string(), content);
        written.push_back(p);
    };

    if (!grades.empty()) {
        std::string per_task =
            "task_id,complexity,model,framework,prompt_style,accuracy,completion_fraction,runtime_error,hallucination\n";
        for (const auto& g : grades) {
            const auto& t = task_of(g, tasks);
            per_task += std::to_string(g.task_id) + "," + std::to_string(t.complexity()) + "," + g.model_id + "," +
                        to_string(g.framework) + "," + to_string(g.prompt_style) + "," + (g.accuracy ? "1" : "0") +
                        "," + num(completion_fraction(g, t)) + "," + (g.runtime_error ? "1" : "0") + "," +
                        (g.hallucination ? "1" : "0") + "\n";
        }
        emit("per_task.csv", per_task);

        const auto acc = aggregate_accuracy(grades);
        std::map<ConfigKey, int> counts;
        for (const auto& g : grades) ++counts[{g.model_id, g.framework}];
        std::string acc_csv = "model,framework,n,accuracy_pct\n";
        std::vector<std::string> models;
        std::vector<Framework> frameworks;
        for (const auto& [k, v] : acc) {
            acc_csv += k.first + "," + to_string(k.second) + "," + std::to_string(counts[k]) + "," + num(v) + "\n";
            if (std::find(models.begin(), models.end(), k.first) == models.end()) models.push_back(k.first);
            if (std::find(frameworks.begin(), frameworks.end(), k.second) == frameworks.end())
                frameworks.push_back(k.second);
        }
        emit("accuracy.csv", acc_csv);

        image::BarChart bars;
        bars.title = "Accuracy by configuration";
        bars.y_label = "accurate solutions (%)";
        bars.categories = models;
        for (auto f : frameworks) {
            image::BarGroup grp{to_string(f), {}};
            for (const auto& m : models) {
                auto it = acc.find({m, f});
                grp.values.push_back(it == acc.end() ? 0.0 : it->second);
            }
            bars.groups.push_back(grp);
        }
        emit("accuracy.ppm", image::render_bar_chart(bars).to_ppm());

        // mean completion per complexity level, one line per configuration
        image::LinePlot lines;
        lines.title = "Subtask completion vs task complexity";
        lines.x_label = "required subtasks";
        lines.y_label = "completed subtasks (%)";
        lines.markers = true;
        std::map<ConfigKey, std::map<int, std::vector<double>>> by_cx;
        for (const auto& g : grades) {
            const auto& t = task_of(g, tasks);
            by_cx[{g.model_id, g.framework}][t.complexity()].push_back(100.0 * completion_fraction(g, t));
        }
        std::string cx_csv = "model,framework,complexity,n,mean_completion_pct\n";
        for (const auto& [k, levels] : by_cx) {
            image::Line line{config_name(k.first, k.second), {}, {}};
            for (const auto& [c, vals] : levels) {
                line.x.push_back(c);
                line.y.push_back(mean(vals));
                cx_csv += k.first + "," + to_string(k.second) + "," + std::to_string(c) + "," +
                          std::to_string(vals.size()) + "," + num(mean(vals)) + "\n";
            }
            lines.lines.push_back(line);
        }
        emit("completion_by_complexity.csv", cx_csv);
        emit("completion_by_complexity.ppm", image::render_line_plot(lines).to_ppm());

        std::string corr = "model,framework,n,rho_accuracy,p_accuracy,defined_accuracy,rho_completion,p_completion,"
                           "defined_completion\n";
        for (const auto& c : complexity_correlations(grades, tasks))
            corr += c.model_id + "," + to_string(c.framework) + "," + std::to_string(c.n) + "," +
                    num(c.accuracy.rho) + "," + num(c.accuracy.p_value) + "," + (c.accuracy.defined ? "1" : "0") +
                    "," + num(c.completion.rho) + "," + num(c.completion.p_value) + "," +
                    (c.completion.defined ? "1" : "0") + "\n";
        emit("complexity_correlation.csv", corr);
    }

    if (!ladder_grades.empty()) {
        for (const auto& g : ladder_grades) task_of(g, ladder);
        const auto report = robustness_cv(ladder_grades, ladder);
        std::string rob = "model,prompt_style";
        for (const auto& t : ladder) rob += ",task" + std::to_string(t.task_id) + "_pct";
        rob += ",mean,sd,cv\n";
        image::LinePlot lines;
        lines.title = "Completion across the prompt ladder";
        lines.x_label = "required subtasks";
        lines.y_label = "completed subtasks (%)";
        lines.markers = true;
        std::vector<std::string> models;
        for (const auto& e : report) {
            rob += e.model_id + "," + to_string(e.style);
            for (double v : e.completion_pct) rob += "," + num(v);
            rob += "," + num(e.mean) + "," + num(e.sd) + "," + (e.cv ? num(*e.cv) : std::string("undefined")) + "\n";
            image::Line line{e.model_id + " / " + to_string(e.style), {}, {}};
            for (size_t i = 0; i < e.task_ids.size(); ++i) {
                line.x.push_back(find_task(ladder, e.task_ids[i]).complexity());
                line.y.push_back(e.completion_pct[i]);
            }
            lines.lines.push_back(line);
            if (std::find(models.begin(), models.end(), e.model_id) == models.end()) models.push_back(e.model_id);
        }
        emit("robustness.csv", rob);
        emit("robustness_completion.ppm", image::render_line_plot(lines).to_ppm());

        image::BarChart cv;
        cv.title = "Coefficient of variation";
        cv.y_label = "CV";
        cv.categories = models;
        for (auto style : {PromptStyle::natural, PromptStyle::ordered}) {
            image::BarGroup grp{to_string(style), {}};
            bool any = false;
            for (const auto& m : models) {
                double v = 0.0;
                for (const auto& e : report)
                    if (e.model_id == m && e.style == style && e.cv) {
                        v = *e.cv;
                        any = true;
                    }
                grp.values.push_back(v);
            }
            if (any) cv.groups.push_back(grp);
        }
        if (!cv.groups.empty()) emit("robustness_cv.ppm", image::render_bar_chart(cv).to_ppm());

        std::string tt = std::string("model,test,sides,t,df,p,degenerate\n");
        for (const auto& s : style_comparisons(ladder_grades, ladder, options.t_test))
            tt += s.model_id + "," + (options.t_test.pooled ? "pooled" : "welch") + "," +
                  (options.t_test.two_sided ? "two" : "one") + "," + num(s.test.t) + "," + num(s.test.df) + "," +
                  num(s.test.p_value) + "," + (s.test.degenerate ? "1" : "0") + "\n";
        emit("style_ttest.csv", tt);
    }
    return written;
}

} // namespace mdcrow::eval
