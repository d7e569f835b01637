#include "mdcrow/eval/report.hpp"
#include "mdcrow/eval/runner.hpp"
#include "mdcrow/service/server.hpp"
#include "mdcrow/service/session.hpp"

#include "mdcrow/common/strings.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

using namespace mdcrow;
namespace fs = std::filesystem;

namespace {

struct ModelOptions {
    std::string config_path;
    std::string mock_script;
    std::string mock_dir;  // eval only: task<N>.json per task
    std::string model_id = "mock";
    std::string audit_log;

    void add(CLI::App* app, bool with_dir) {
        auto* cfg = app->add_option("--model-config", config_path, "model config JSON")->check(CLI::ExistingFile);
        auto* mock = app->add_option("--mock-script", mock_script, "scripted completions (JSON array or transcript)")
                         ->check(CLI::ExistingFile);
        cfg->excludes(mock);
        if (with_dir) {
            auto* dir = app->add_option("--mock-dir", mock_dir, "directory of task<N>.json mock scripts")
                            ->check(CLI::ExistingDirectory);
            dir->excludes(cfg)->excludes(mock);
        }
        app->add_option("--model-id", model_id, "model id reported for mock scripts");
        app->add_option("--audit-log", audit_log, "append one JSON line per model request");
    }

    std::shared_ptr<llm::AuditLog> audit() const {
        return audit_log.empty() ? std::make_shared<llm::AuditLog>() : std::make_shared<llm::AuditLog>(audit_log);
    }

    std::shared_ptr<llm::ChatModel> make(const std::string& script_override = "") const {
        if (!script_override.empty())
            return std::make_shared<llm::ScriptedModel>(llm::load_script(script_override), model_id, audit());
        if (!mock_script.empty())
            return std::make_shared<llm::ScriptedModel>(llm::load_script(mock_script), model_id, audit());
        if (!config_path.empty()) return llm::make_model(llm::load_model_config(config_path), audit());
        throw UsageError("choose a model with --model-config or --mock-script");
    }
};

struct RootOptions {
    std::string checkpoint_root = "mdcrow_runs";
    std::string work_root;
    bool live = false;
    std::string corpus;

    void add(CLI::App* app) {
        app->add_option("--checkpoint-root", checkpoint_root, "checkpoint folder root")->capture_default_str();
        app->add_option("--work-root", work_root, "scratch root (default <checkpoint-root>/.work)");
        app->add_flag("--live", live, "use RCSB and UniProt over the network instead of fixtures");
        app->add_option("--corpus", corpus, "literature folder for live mode");
    }

    fs::path work() const { return work_root.empty() ? fs::path(checkpoint_root) / ".work" : fs::path(work_root); }

    service::ContextFactory context() const {
        if (!live) return nullptr;
        const fs::path dir = corpus.empty() ? tools::data_dir() / "corpus" : fs::path(corpus);
        return [dir](registry::FileRegistry& f, sim::EngineAdapter& e, llm::ChatModel* m) {
            return tools::live_context(f, e, m, dir);
        };
    }
};

std::string first_line(const std::string& s, std::size_t max = 100) {
    auto line = s.substr(0, s.find('\n'));
    if (line.size() > max) line = line.substr(0, max) + "...";
    return line;
}

int do_run(const std::string& prompt, const std::optional<std::string>& resume_from, const ModelOptions& mo,
           const RootOptions& ro, int steps, bool llm_summary) {
    auto model = mo.make();
    service::RunEnvironment env;
    env.checkpoint_root = ro.checkpoint_root;
    env.work_root = ro.work();
    env.model = model.get();
    env.agent.step_budget = steps;
    env.llm_summary = llm_summary;
    env.make_context = ro.context();
    service::SessionHooks hooks;
    hooks.on_resume = [&](const registry::RunSummary& prior) {
        std::cout << "Resuming from run " << *resume_from << "\nPrior summary:\n" << prior.text << "\n\n";
    };
    hooks.on_step = [](const agent::TraceStep& s) {
        if (s.action.kind == agent::AgentAction::Kind::final_answer) return;
        std::cout << "[step " << s.index << "] " << s.action.tool_name << ": " << first_line(s.observation)
                  << (s.error ? "  (error)" : "") << "\n";
    };
    auto r = service::run_session({prompt, resume_from}, env, hooks);
    if (r.trace.outcome == agent::Outcome::unrecoverable_error)
        std::cout << "\nRun failed: " << r.trace.error << "\n";
    else
        std::cout << "\nFinal Answer: " << r.trace.final_text << "\n";
    std::cout << "\nFiles:\n";
    if (r.files.empty()) std::cout << "  (none)\n";
    for (const auto& f : r.files)
        std::cout << "  " << f.file_id << " (" << registry::to_string(f.kind) << "): " << f.description << "\n";
    std::cout << "\nrun_id: " << r.run_id << "\n";
    return r.trace.outcome == agent::Outcome::unrecoverable_error ? 1 : 0;
}

service::HttpServer* g_server = nullptr;
void on_signal(int) {
    if (g_server) g_server->stop();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdcrow: language-model agent for molecular dynamics workflows"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the agent on one prompt");
    std::string prompt;
    std::vector<std::string> resume_pair;
    int steps = 40;
    bool no_llm_summary = false;
    ModelOptions run_model;
    RootOptions run_roots;
    run->add_option("-p,--prompt", prompt, "the question or task")->required();
    run->add_option("--resume", resume_pair, "continue from a checkpoint: --resume <dir> <run_id>")->expected(2);
    run->add_option("--steps", steps, "step budget")->check(CLI::Range(1, 1000))->capture_default_str();
    run->add_flag("--no-llm-summary", no_llm_summary, "use the mechanical digest as the run summary");
    run_model.add(run, false);
    run_roots.add(run);

    // resume
    auto* resume = app.add_subcommand("resume", "continue a checkpointed run");
    std::string resume_dir, resume_id;
    ModelOptions resume_model;
    RootOptions resume_roots;
    resume->add_option("dir", resume_dir, "checkpoint root")->required()->check(CLI::ExistingDirectory);
    resume->add_option("run_id", resume_id, "run to continue")->required();
    resume->add_option("-p,--prompt", prompt, "follow-up request")->required();
    resume->add_option("--steps", steps, "step budget")->check(CLI::Range(1, 1000));
    resume->add_flag("--no-llm-summary", no_llm_summary, "use the mechanical digest as the run summary");
    resume_model.add(resume, false);
    resume->add_option("--work-root", resume_roots.work_root, "scratch root (default <dir>/.work)");
    resume->add_flag("--live", resume_roots.live, "use RCSB and UniProt over the network");

    // eval
    auto* eval = app.add_subcommand("eval", "run a task file under one framework");
    std::string tasks_path, out_dir, framework = "mdcrow", style = "natural";
    std::vector<int> only;
    double sandbox_limit = 120.0;
    ModelOptions eval_model;
    eval->add_option("--tasks", tasks_path, "task file")->required()->check(CLI::ExistingFile);
    eval->add_option("--framework", framework, "mdcrow | single_query | react_interpreter")->capture_default_str();
    eval->add_option("--style", style, "natural | ordered")->capture_default_str();
    eval->add_option("--out", out_dir, "output directory")->required();
    eval->add_option("--task", only, "run only these task ids");
    eval->add_option("--steps", steps, "agent step budget")->check(CLI::Range(1, 1000));
    eval->add_option("--sandbox-time-limit", sandbox_limit, "interpreter time limit in seconds")
        ->check(CLI::PositiveNumber);
    eval_model.add(eval, true);

    // report
    auto* report = app.add_subcommand("report", "tables and figures from recorded grades");
    std::string grades_dir, ladder_grades_dir, ladder_path, report_out;
    bool pooled = false, one_sided = false;
    report->add_option("--grades", grades_dir, "grade records of the task set")->check(CLI::ExistingDirectory);
    report->add_option("--tasks", tasks_path, "task file the grades refer to")->check(CLI::ExistingFile);
    report->add_option("--ladder-grades", ladder_grades_dir, "grade records of the robustness ladder")
        ->check(CLI::ExistingDirectory);
    report->add_option("--ladder", ladder_path, "ladder task file")->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "output directory")->required();
    report->add_flag("--pooled", pooled, "equal-variance t-test instead of Welch");
    report->add_flag("--one-sided", one_sided, "one-sided t-test (natural > ordered)");

    // serve
    auto* serve = app.add_subcommand("serve", "HTTP chat service");
    std::string host = "127.0.0.1";
    int port = 8080;
    ModelOptions serve_model;
    RootOptions serve_roots;
    serve->add_option("--host", host, "bind address")->capture_default_str();
    serve->add_option("--port", port, "port (0 picks one)")->check(CLI::Range(0, 65535))->capture_default_str();
    serve->add_option("--steps", steps, "step budget per run")->check(CLI::Range(1, 1000));
    serve->add_flag("--no-llm-summary", no_llm_summary, "use the mechanical digest as the run summary");
    serve_model.add(serve, false);
    serve_roots.add(serve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*run) {
            std::optional<std::string> from;
            if (!resume_pair.empty()) {
                run_roots.checkpoint_root = resume_pair[0];
                from = resume_pair[1];
            }
            return do_run(prompt, from, run_model, run_roots, steps, !no_llm_summary);
        }
        if (*resume) {
            resume_roots.checkpoint_root = resume_dir;
            return do_run(prompt, resume_id, resume_model, resume_roots, steps, !no_llm_summary);
        }
        if (*eval) {
            auto tasks = eval::load_tasks(tasks_path);
            if (!only.empty()) {
                std::vector<eval::TaskSpec> picked;
                for (int id : only) picked.push_back(eval::find_task(tasks, id));
                tasks = picked;
            }
            eval::RunTaskConfig cfg;
            cfg.out_dir = out_dir;
            cfg.style = eval::parse_prompt_style(style);
            cfg.agent.step_budget = steps;
            cfg.sandbox.time_limit_s = sandbox_limit;
            const auto fw = eval::parse_framework(framework);
            auto factory = [&](const eval::TaskSpec& t) {
                if (!eval_model.mock_dir.empty()) {
                    const auto p = fs::path(eval_model.mock_dir) / ("task" + std::to_string(t.task_id) + ".json");
                    if (!fs::exists(p)) throw NotFoundError("no mock script " + p.string());
                    return eval_model.make(p.string());
                }
                return eval_model.make();
            };
            const auto entries = eval::run_batch(tasks, fw, factory, cfg);
            int failed = 0;
            for (const auto& e : entries) {
                std::cout << "task " << e.task_id << ": "
                          << (e.ok ? e.output.outcome : std::string("failed")) << (e.error.empty() ? "" : " - ")
                          << first_line(e.error, 160) << "\n";
                if (!e.ok) ++failed;
            }
            std::cout << "index: " << (fs::path(out_dir) / "index.json").string() << "\n";
            return failed == static_cast<int>(entries.size()) && failed > 0 ? 1 : 0;
        }
        if (*report) {
            if (grades_dir.empty() && ladder_grades_dir.empty())
                throw UsageError("give --grades and/or --ladder-grades");
            std::vector<eval::GradeRecord> grades, ladder_grades;
            std::vector<eval::TaskSpec> tasks, ladder;
            if (!grades_dir.empty()) {
                if (tasks_path.empty()) throw UsageError("--grades needs --tasks");
                grades = eval::load_grades(grades_dir);
                tasks = eval::load_tasks(tasks_path);
            }
            if (!ladder_grades_dir.empty()) {
                if (ladder_path.empty()) throw UsageError("--ladder-grades needs --ladder");
                ladder_grades = eval::load_grades(ladder_grades_dir);
                ladder = eval::load_tasks(ladder_path);
            }
            eval::ReportOptions opt;
            opt.t_test.pooled = pooled;
            opt.t_test.two_sided = !one_sided;
            if (!grades.empty())
                for (const auto& [k, v] : eval::aggregate_accuracy(grades))
                    std::cout << k.first << " / " << eval::to_string(k.second) << ": " << format_number(v)
                              << "% accurate\n";
            for (const auto& p : eval::write_report(grades, tasks, ladder_grades, ladder, report_out, opt))
                std::cout << "wrote " << p.string() << "\n";
            return 0;
        }
        if (*serve) {
            service::ServiceConfig cfg;
            cfg.checkpoint_root = serve_roots.checkpoint_root;
            cfg.work_root = serve_roots.work();
            cfg.agent.step_budget = steps;
            cfg.llm_summary = !no_llm_summary;
            cfg.make_context = serve_roots.context();
            serve_model.make();  // fail fast on a bad model setup
            cfg.model_factory = [&serve_model](const std::string&) { return serve_model.make(); };
            service::SessionService svc(cfg);
            service::HttpServer server(svc);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            server.run(host, port, [&](int p) {
                std::cout << "listening on http://" << host << ":" << p << std::endl;
            });
            g_server = nullptr;
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
