#include "support.hpp"

#include "mdcrow/agent/prompt.hpp"
#include "mdcrow/eval/grades.hpp"
#include "mdcrow/eval/report.hpp"
#include "mdcrow/eval/runner.hpp"
#include "mdcrow/eval/sandbox.hpp"
#include "mdcrow/eval/stats.hpp"
#include "mdcrow/eval/tasks.hpp"
#include "mdcrow/registry/checkpoint.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace mdcrow;
using namespace mdcrow::eval;

namespace {

std::vector<TaskSpec> shipped_tasks() { return load_tasks((testing::data() / "tasks25.json").string()); }
std::vector<TaskSpec> ladder() { return load_tasks((testing::data() / "ladder10.json").string()); }

std::string task_json(const std::string& subtasks, int complexity) {
    return R"({"schema": "mdcrow.tasks/1", "tasks": [{"task_id": 1, "prompt_natural": "p", "complexity": )" +
           std::to_string(complexity) + R"(, "subtasks": [)" + subtasks + "]}]}";
}

// a -> b -> c
TaskSpec chain() {
    return parse_tasks(task_json(R"({"id": "a", "description": "A", "depends_on": []},
                                     {"id": "b", "description": "B", "depends_on": ["a"]},
                                     {"id": "c", "description": "C", "depends_on": ["b"]})",
                                 3))
        .front();
}

GradeRecord grade_for(const TaskSpec& t, bool value) {
    GradeRecord g;
    g.task_id = t.task_id;
    g.model_id = "m";
    for (const auto& s : t.subtasks) g.completed[s.id] = value;
    return g;
}

std::shared_ptr<llm::ScriptedModel> mock(const std::string& name) {
    const auto j = nlohmann::json::parse(testing::slurp(testing::data() / "mock" / name));
    return std::make_shared<llm::ScriptedModel>(j.get<std::vector<std::string>>(), "mock");
}

}  // namespace

TEST_CASE("task set: complexities and lookup") {
    const auto tasks = shipped_tasks();
    REQUIRE(tasks.size() == 25);
    const std::vector<int> expected{8, 1, 3, 1, 5, 7, 10, 10, 2, 3, 4, 8, 7, 6, 9, 5, 2, 4, 4, 1, 2, 2, 3, 6, 9};
    std::vector<int> got;
    for (const auto& t : tasks) got.push_back(t.complexity());
    CHECK(got == expected);
    CHECK(find_task(tasks, 2).complexity() == 1);
    CHECK(find_task(tasks, 7).complexity() == 10);
    CHECK(find_task(tasks, 25).complexity() == 9);
    CHECK(*std::min_element(got.begin(), got.end()) == 1);
    CHECK(*std::max_element(got.begin(), got.end()) == 10);
    CHECK_THROWS_AS(find_task(tasks, 26), NotFoundError);

    const auto lad = ladder();
    REQUIRE(lad.size() == 10);
    for (std::size_t i = 0; i < lad.size(); ++i) {
        CHECK(lad[i].complexity() == static_cast<int>(i) + 1);
        CHECK(lad[i].prompt_ordered.has_value());
    }
    CHECK(parse_tasks(tasks_to_json(tasks)) == tasks);
}

TEST_CASE("task set: integrity errors") {
    CHECK_THROWS_AS(parse_tasks(task_json(R"({"id": "a", "description": "A", "depends_on": ["b"]},
                                             {"id": "b", "description": "B", "depends_on": ["a"]})",
                                          2)),
                    ParseError);
    CHECK_THROWS_AS(parse_tasks(task_json(R"({"id": "a", "description": "A", "depends_on": []},
                                             {"id": "a", "description": "A", "depends_on": []})",
                                          2)),
                    ParseError);
    CHECK_THROWS_AS(parse_tasks(task_json(R"({"id": "a", "description": "A", "depends_on": ["zz"]})", 1)),
                    ParseError);
    CHECK_THROWS_AS(parse_tasks(task_json(R"({"id": "a", "description": "A", "depends_on": []})", 2)), ParseError);
    CHECK_THROWS_AS(parse_tasks(task_json("", 0)), ParseError);
    CHECK_THROWS_AS(parse_tasks("{"), ParseError);
}

TEST_CASE("property: topological order respects dependencies") {
    for (const auto& t : shipped_tasks()) {
        const auto order = topological_order(t);
        CHECK(order.size() == t.subtasks.size());
        std::map<std::string, std::size_t> pos;
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
        for (const auto& s : t.subtasks)
            for (const auto& d : s.depends_on) CHECK(pos.at(d) < pos.at(s.id));
    }
}

TEST_CASE("completion fraction and cascade") {
    std::string subs;
    for (int i = 0; i < 10; ++i)
        subs += std::string(i ? "," : "") + R"({"id": "s)" + std::to_string(i) +
                R"(", "description": "x", "depends_on": []})";
    const auto flat = parse_tasks(task_json(subs, 10)).front();
    auto g = grade_for(flat, false);
    for (int i = 0; i < 5; ++i) g.completed["s" + std::to_string(i)] = true;
    CHECK(completion_fraction(g, flat) == 0.5);

    const auto c = chain();
    auto broken = grade_for(c, true);
    broken.completed["a"] = false;
    CHECK(completion_fraction(broken, c) == 0.0);
    const auto cascaded = apply_cascade(broken, c);
    CHECK_FALSE(cascaded.at("b"));
    CHECK_FALSE(cascaded.at("c"));
    CHECK(completion_fraction(grade_for(c, true), c) == 1.0);

    auto extra = grade_for(c, true);
    extra.completed["zz"] = true;
    CHECK_THROWS_AS(check_grade(extra, c), UsageError);
    auto missing = grade_for(c, true);
    missing.completed.erase("c");
    CHECK_THROWS_AS(check_grade(missing, c), UsageError);
}

TEST_CASE("property: cascade closure and monotonicity over shipped tasks") {
    std::mt19937_64 rng(11);
    std::bernoulli_distribution coin(0.6);
    for (const auto& t : shipped_tasks())
        for (int trial = 0; trial < 40; ++trial) {
            auto g = grade_for(t, false);
            for (auto& [id, v] : g.completed) v = coin(rng);
            const auto c = apply_cascade(g, t);
            for (const auto& s : t.subtasks) {
                if (!c.at(s.id)) continue;
                CHECK(g.completed.at(s.id));
                for (const auto& d : s.depends_on) CHECK(c.at(d));
            }
            const double before = completion_fraction(g, t);
            CHECK(before >= 0.0);
            CHECK(before <= 1.0);
            for (auto& [id, v] : g.completed)
                if (!v) {
                    auto up = g;
                    up.completed[id] = true;
                    CHECK(completion_fraction(up, t) >= before);
                }
        }
}

TEST_CASE("aggregate accuracy reproduces the published rates") {
    const auto grades = load_grades(testing::data() / "grades/reference");
    REQUIRE(grades.size() == 75);
    const auto tasks = shipped_tasks();
    for (const auto& g : grades) check_grade(g, find_task(tasks, g.task_id));
    const auto acc = aggregate_accuracy(grades);
    CHECK(acc.at({"gpt-4o", Framework::mdcrow}) == doctest::Approx(72.0).epsilon(1e-12));
    CHECK(acc.at({"llama3-405b", Framework::mdcrow}) == doctest::Approx(68.0).epsilon(1e-12));
    CHECK(acc.at({"gpt-4o", Framework::react_interpreter}) == doctest::Approx(28.0).epsilon(1e-12));

    auto none = grades;
    for (auto& g : none) g.accuracy = false;
    for (const auto& [k, v] : aggregate_accuracy(none)) CHECK(v == 0.0);
}

TEST_CASE("grade records round-trip") {
    testing::TempDir dir("grades");
    auto g = grade_for(chain(), true);
    g.framework = Framework::react_interpreter;
    g.prompt_style = PromptStyle::ordered;
    g.hallucination = true;
    g.notes = "n";
    save_grade(g, dir.path());
    CHECK(grade_from_json(grade_to_json(g)) == g);
    REQUIRE(load_grades(dir.path()).size() == 1);
    CHECK(load_grades(dir.path())[0] == g);
    CHECK_THROWS_AS(grade_from_json(R"({"schema": "mdcrow.grade/1"})"), ParseError);
}

TEST_CASE("descriptive statistics") {
    CHECK(*coefficient_of_variation({1.0, 0.5}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(*coefficient_of_variation({100, 100, 100}) == 0.0);
    CHECK_FALSE(coefficient_of_variation({0, 0}).has_value());
    CHECK(mean({1, 2, 3, 4}) == 2.5);
    CHECK(population_sd({2, 4, 4, 4, 5, 5, 7, 9}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sample_variance({1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(average_ranks({10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
}

TEST_CASE("robustness report matches a by-hand recomputation") {
    const auto lad = ladder();
    const auto grades = load_grades(testing::data() / "grades/ladder_synthetic");
    const auto report = robustness_cv(grades, lad);
    REQUIRE_FALSE(report.empty());
    for (const auto& e : report) {
        std::vector<double> pct;
        for (const auto& t : lad)
            for (const auto& g : grades)
                if (g.model_id == e.model_id && g.prompt_style == e.style && g.task_id == t.task_id)
                    pct.push_back(100.0 * completion_fraction(g, t));
        REQUIRE(pct.size() == lad.size());
        double m = 0;
        for (double v : pct) m += v;
        m /= static_cast<double>(pct.size());
        double ss = 0;
        for (double v : pct) ss += (v - m) * (v - m);
        const double sd = std::sqrt(ss / static_cast<double>(pct.size()));
        for (std::size_t i = 0; i < pct.size(); ++i)
            CHECK(e.completion_pct[i] == doctest::Approx(pct[i]).epsilon(1e-12));
        CHECK(e.mean == doctest::Approx(m).epsilon(1e-12));
        CHECK(e.sd == doctest::Approx(sd).epsilon(1e-12));
        if (m > 0) CHECK(*e.cv == doctest::Approx(sd / m).epsilon(1e-12));
    }
    auto short_grades = grades;
    short_grades.pop_back();
    CHECK_THROWS_AS(robustness_cv(short_grades, lad), UsageError);
}

TEST_CASE("spearman") {
    // Brute-force Spearman: Pearson of average ranks.
    auto oracle = [](const std::vector<double>& x, const std::vector<double>& y) {
        auto rank = [](const std::vector<double>& v) {
            std::vector<double> r(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                double less = 0, equal = 0;
                for (double w : v) less += w < v[i], equal += w == v[i];
                r[i] = less + (equal + 1) / 2;
            }
            return r;
        };
        const auto rx = rank(x), ry = rank(y);
        const double n = static_cast<double>(x.size());
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i] / n, my += ry[i] / n;
        double sxy = 0, sxx = 0, syy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
            syy += (ry[i] - my) * (ry[i] - my);
        }
        return sxy / std::sqrt(sxx * syy);
    };
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> u(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 12; ++i) x.push_back(u(rng)), y.push_back(u(rng));
        const auto c = spearman(x, y);
        if (!c.defined) continue;
        CHECK(c.rho == doctest::Approx(oracle(x, y)).epsilon(1e-12));
    }
    CHECK(spearman({1, 2, 3, 4}, {8, 6, 4, 2}).rho == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_FALSE(spearman({1, 2, 3}, {5, 5, 5}).defined);

    // Reference values from scipy.stats.spearmanr.
    const auto a = spearman({1, 2, 3, 4, 5, 6}, {2, 1, 4, 3, 6, 5});
    CHECK(a.rho == doctest::Approx(0.8285714285714287).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(0.04156268221574334).epsilon(1e-9));
    const auto b = spearman({1, 2, 2, 3, 5}, {3, 1, 4, 4, 9});
    CHECK(b.rho == doctest::Approx(0.7631578947368421).epsilon(1e-12));
    CHECK(b.p_value == doctest::Approx(0.1333391195318063).epsilon(1e-9));
}

TEST_CASE("t tests") {
    const std::vector<double> a{27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4};
    const std::vector<double> b{27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4};
    // Reference values from scipy.stats.ttest_ind.
    const auto w = welch_t_test(a, b);
    CHECK(w.t == doctest::Approx(-2.455356398286006).epsilon(1e-9));
    CHECK(w.p_value == doctest::Approx(0.021378001462866985).epsilon(1e-9));
    const double va = sample_variance(a) / 15, vb = sample_variance(b) / 15;
    CHECK(w.df == doctest::Approx((va + vb) * (va + vb) / (va * va / 14 + vb * vb / 14)).epsilon(1e-12));

    TTestOptions pooled;
    pooled.pooled = true;
    const auto s = two_sample_t_test(a, b, pooled);
    CHECK(s.df == 28.0);
    CHECK(s.p_value == doctest::Approx(0.020544522734125933).epsilon(1e-9));

    TTestOptions one_sided;
    one_sided.two_sided = false;
    CHECK(two_sample_t_test(b, a, one_sided).p_value == doctest::Approx(0.010689000731433492).epsilon(1e-9));

    const auto same = welch_t_test({1, 2, 3, 4}, {1, 2, 3, 4});
    CHECK(same.t == 0.0);
    CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(welch_t_test({1, 1.1, 0.9, 1.05, 0.95}, {10, 10.2, 9.9, 10.1, 9.8}).p_value < 1e-3);
    CHECK(welch_t_test({2, 2, 2}, {2, 2, 2}).degenerate);
    CHECK(t_two_sided_p(0.0, 5.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sandbox") {
    testing::TempDir dir("sandbox");
    SandboxConfig cfg;
    CHECK(cfg.time_limit_s == 120.0);
    CHECK_FALSE(cfg.allow_network);
    cfg.work_dir = dir / "work";
    const auto r = run_snippet("print(1+1)", cfg);
    CHECK(r.exit_code == 0);
    CHECK(trim(r.stdout_text) == "2");
    CHECK(trim(sandbox_observation(r, cfg)) == "2");

    cfg.time_limit_s = 1.0;
    const auto start = std::chrono::steady_clock::now();
    const auto loop = run_snippet("while True:\n    pass\n", cfg);
    CHECK(testing::seconds_since(start) < 10.0);
    CHECK(loop.timed_out);
    CHECK(sandbox_observation(loop, cfg).rfind("Error: resource limit", 0) == 0);

    const auto err = run_snippet("raise ValueError('boom')", cfg);
    CHECK(err.exit_code != 0);
    CHECK(sandbox_observation(err, cfg).find("boom") != std::string::npos);

    // Environment is scrubbed.
    ::setenv("MDCROW_TEST_SECRET", "hunter2", 1);
    CHECK(run_snippet("import os; print(os.environ.get('MDCROW_TEST_SECRET'))", cfg).stdout_text.find("hunter2") ==
          std::string::npos);
}

TEST_CASE("code block combination") {
    CHECK(combine_code_blocks("a\n```python\nx = 1\n```\ntext\n```\ny = 2\n```\n") == "x = 1\n\ny = 2\n");
    CHECK(combine_code_blocks("no code here").empty());
}

TEST_CASE("run_task for every framework") {
    testing::TempDir dir("runtask");
    const auto tasks = shipped_tasks();
    const auto& task2 = find_task(tasks, 2);
    FakeClock clock;
    SeededIdSource ids(5);
    RunTaskConfig cfg;
    cfg.out_dir = dir / "out";
    cfg.clock = &clock;
    cfg.ids = &ids;

    SUBCASE("mdcrow") {
        auto model = mock("task2.json");
        const auto out = run_task(task2, Framework::mdcrow, *model, cfg);
        CHECK(out.outcome == "final_answer");
        CHECK_FALSE(out.runtime_error);
        CHECK(out.completions == 2);
        const auto sheet = testing::slurp(out.worksheet);
        CHECK(sheet.find("| 1 | download |") != std::string::npos);
        const auto t = nlohmann::json::parse(testing::slurp(out.transcript));
        CHECK(t["completions"].size() == 2);
        CHECK(t["trace"].dump().find("1LYZ is registered as str_0001") != std::string::npos);
        const auto tmpl = grade_from_json(testing::slurp(out.grade_template));
        CHECK_NOTHROW(check_grade(tmpl, task2));
        CHECK(std::filesystem::exists(dir / "out/checkpoints" / out.run_id / "manifest"));

        const auto& big = find_task(tasks, 1);
        const auto sheet8 = grading_worksheet(big, Framework::mdcrow, PromptStyle::natural, "m", "r");
        for (int i = 1; i <= big.complexity(); ++i)
            CHECK(sheet8.find("| " + std::to_string(i) + " | ") != std::string::npos);
    }
    SUBCASE("single query") {
        llm::ScriptedModel model({"Here you go.\n```python\nimport openmm\n```\nand\n```python\nprint('run')\n```\n"});
        const auto out = run_task(task2, Framework::single_query, model, cfg);
        CHECK(out.completions == 1);
        CHECK(out.outcome == "final_answer");
        const auto t = nlohmann::json::parse(testing::slurp(out.transcript));
        CHECK(t["system_prompt"].get<std::string>() == agent::direct_llm_prompt());
        CHECK(agent::direct_llm_prompt().find("combine any scripts into one script") != std::string::npos);
        CHECK(t.contains("script_file"));
        const auto cp = registry::load_checkpoint(dir / "out/checkpoints", out.run_id, dir / "resume").checkpoint;
        REQUIRE(cp.files.size() == 1);
        CHECK(cp.files[0].kind == registry::FileKind::script);
    }
    SUBCASE("crash is a runtime error") {
        llm::ScriptedModel model({});
        const auto out = run_task(task2, Framework::mdcrow, model, cfg);
        CHECK(out.runtime_error);
        CHECK(out.outcome == "unrecoverable_error");
        CHECK(grade_from_json(testing::slurp(out.grade_template)).runtime_error);
    }
    SUBCASE("react with interpreter") {
        llm::ScriptedModel model({testing::call_block("PythonREPL", "print(6*7)"), testing::final_block("42")});
        const auto out = run_task(task2, Framework::react_interpreter, model, cfg);
        CHECK(out.outcome == "final_answer");
        const auto t = nlohmann::json::parse(testing::slurp(out.transcript));
        const auto sys = t["system_prompt"].get<std::string>();
        CHECK(sys.find("PythonREPL") != std::string::npos);
        CHECK(sys.find("PDBFileDownloader") == std::string::npos);
        CHECK(t["trace"].dump().find("42") != std::string::npos);
        CHECK(interpreter_toolset({}).size() == 1);
    }
}

TEST_CASE("batch keeps going past a failing task") {
    testing::TempDir dir("batch");
    const auto tasks = shipped_tasks();
    std::vector<TaskSpec> two{find_task(tasks, 2), find_task(tasks, 20)};
    FakeClock clock;
    SeededIdSource ids(6);
    RunTaskConfig cfg;
    cfg.out_dir = dir / "out";
    cfg.clock = &clock;
    cfg.ids = &ids;
    ModelFactory factory = [](const TaskSpec& t) -> std::shared_ptr<llm::ChatModel> {
        if (t.task_id == 20) throw UsageError("no model for task 20");
        return mock("task2.json");
    };
    const auto entries = run_batch(two, Framework::mdcrow, factory, cfg);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].ok);
    CHECK_FALSE(entries[1].ok);
    CHECK(entries[1].error.find("no model for task 20") != std::string::npos);
    const auto idx = nlohmann::json::parse(testing::slurp(dir / "out/index.json"));
    CHECK(idx["tasks"].size() == 2);
    CHECK(idx["tasks"][0]["status"] == "ok");
    CHECK(idx["tasks"][1]["status"] == "failed");

    // Fresh registries: each task's first download is str_0001.
    const auto again = run_batch({find_task(tasks, 2), find_task(tasks, 2)}, Framework::mdcrow,
                                 [](const TaskSpec&) { return mock("task2.json"); }, cfg);
    for (const auto& e : again) {
        const auto cp = registry::load_checkpoint(dir / "out/checkpoints", e.output.run_id, dir / "resume").checkpoint;
        REQUIRE(cp.files.size() == 1);
        CHECK(cp.files[0].file_id == "str_0001");
    }
}

TEST_CASE("report writes tables and figures") {
    testing::TempDir dir("report");
    const auto grades = load_grades(testing::data() / "grades/reference");
    const auto ladder_grades = load_grades(testing::data() / "grades/ladder_synthetic");
    const auto files = write_report(grades, shipped_tasks(), ladder_grades, ladder(), dir.path());
    std::set<std::string> names;
    for (const auto& p : files) {
        CHECK(std::filesystem::file_size(p) > 0);
        names.insert(p.filename().string());
    }
    for (const char* n : {"per_task.csv", "accuracy.csv", "accuracy.ppm", "complexity_correlation.csv",
                          "robustness.csv", "style_ttest.csv"})
        CHECK_MESSAGE(names.count(n), n);
    const auto acc = testing::slurp(dir / "accuracy.csv");
    CHECK(acc.find("72") != std::string::npos);
    CHECK(acc.find("68") != std::string::npos);
    CHECK(acc.find("28") != std::string::npos);

    const auto corr = complexity_correlations(grades, shipped_tasks());
    CHECK(corr.size() == 3);
    CHECK(style_comparisons(ladder_grades, ladder()).size() >= 1);
    CHECK_THROWS_AS(write_report({}, {}, {}, {}, dir / "empty"), UsageError);
}
