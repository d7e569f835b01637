#include "support.hpp"

#include "mdcrow/common/http.hpp"
#include "mdcrow/registry/checkpoint.hpp"
#include "mdcrow/service/server.hpp"
#include "mdcrow/service/session.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <mutex>

using namespace mdcrow;
using namespace mdcrow::service;
using nlohmann::json;

namespace {

struct Proc {
    int status = -1;
    std::string out;
};

Proc run_cli(const std::string& args) {
    const std::string cmd = std::string(MDCROW_CLI) + " " + args + " 2>&1";
    Proc p;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) p.out.append(buf, n);
    const int raw = ::pclose(pipe);
    p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return p;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string last_line(const std::string& text) {
    const auto lines = split(trim(text), '\n');
    return lines.empty() ? std::string() : lines.back();
}

std::vector<std::string> mock_script(const std::string& name) {
    return json::parse(testing::slurp(testing::data() / "mock" / name)).get<std::vector<std::string>>();
}

// Parses a server-sent event stream into its data payloads.
std::vector<json> sse_events(const std::string& body) {
    std::vector<json> out;
    for (const auto& line : split(body, '\n'))
        if (line.rfind("data: ", 0) == 0) out.push_back(json::parse(line.substr(6)));
    return out;
}

// Hands out one scripted model per run, in order.
struct ScriptQueue {
    std::mutex mu;
    std::deque<std::vector<std::string>> scripts;
    std::shared_ptr<llm::ChatModel> next() {
        std::lock_guard lk(mu);
        REQUIRE_FALSE(scripts.empty());
        auto s = scripts.front();
        scripts.pop_front();
        return std::make_shared<llm::ScriptedModel>(s, "mock");
    }
};

// Returns `first`, then blocks every later call until released.
class GateModel final : public llm::ChatModel {
public:
    explicit GateModel(std::string first) : first_(std::move(first)) {}
    std::string complete(const std::vector<llm::ChatMessage>&) override {
        std::unique_lock lk(mu_);
        if (calls_++ == 0) return first_;
        blocked_ = true;
        cv_.notify_all();
        cv_.wait(lk, [&] { return open_; });
        return testing::final_block("released");
    }
    std::string model_id() const override { return "gate"; }
    void wait_blocked() {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return blocked_; });
    }
    void release() {
        std::lock_guard lk(mu_);
        open_ = true;
        cv_.notify_all();
    }

private:
    std::string first_;
    std::mutex mu_;
    std::condition_variable cv_;
    int calls_ = 0;
    bool blocked_ = false, open_ = false;
};

struct Service {
    testing::TempDir dir{"service"};
    ScriptQueue queue;
    std::unique_ptr<SessionService> svc;
    std::unique_ptr<HttpServer> http;
    std::string base;
    std::shared_ptr<HttpClient> client = make_http_client(30.0);

    explicit Service(std::function<std::shared_ptr<llm::ChatModel>(const std::string&)> factory = nullptr) {
        ServiceConfig cfg;
        cfg.checkpoint_root = dir / "runs";
        cfg.work_root = dir / "work";
        cfg.model_factory = factory ? factory : [this](const std::string&) { return queue.next(); };
        cfg.clock = std::make_shared<FakeClock>();
        cfg.ids = std::make_shared<SeededIdSource>(9);
        svc = std::make_unique<SessionService>(cfg);
        http = std::make_unique<HttpServer>(*svc);
        base = "http://127.0.0.1:" + std::to_string(http->start("127.0.0.1", 0));
    }
    ~Service() { http->stop(); }

    HttpResponse post(const std::string& path, const json& body) {
        return client->post(base + path, body.dump(), "application/json", {});
    }
    HttpResponse get(const std::string& path) { return client->get(base + path, {}); }
    std::string create(const std::optional<std::string>& run_id = std::nullopt) {
        const auto r = post("/sessions", run_id ? json{{"run_id", *run_id}} : json::object());
        REQUIRE(r.status == 201);
        return json::parse(r.body)["session_id"].get<std::string>();
    }
};

}  // namespace

TEST_CASE("cli: run with a mock script") {
    testing::TempDir dir("cli");
    const auto p = run_cli("run -p 'hello' --mock-script " + q(testing::data() / "mock/trivial.json") +
                           " --checkpoint-root " + q(dir / "runs"));
    CHECK_MESSAGE(p.status == 0, p.out);
    CHECK(p.out.find("Final Answer: MDCrow is ready.") != std::string::npos);
    const auto last = last_line(p.out);
    REQUIRE(last.rfind("run_id: ", 0) == 0);
    const auto run_id = last.substr(8);
    CHECK(run_id.size() == 16);
    CHECK(std::filesystem::exists(dir / "runs" / run_id / "manifest"));
}

TEST_CASE("cli: usage errors exit 2 with usage text") {
    const auto p = run_cli("run --bogus-flag");
    CHECK(p.status == 2);
    CHECK(p.out.find("Usage") != std::string::npos);
    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("--help").status == 0);
}

TEST_CASE("cli: resume echoes the prior summary before step 1") {
    testing::TempDir dir("cli_resume");
    const auto first = run_cli("run -p 'simulate 1VII' --mock-script " + q(testing::data() / "mock/resume_phase1.json") +
                               " --checkpoint-root " + q(dir / "runs"));
    REQUIRE_MESSAGE(first.status == 0, first.out);
    const auto run_id = last_line(first.out).substr(8);
    const auto second = run_cli("resume " + q(dir / "runs") + " " + run_id + " -p 'plot the RMSD' --mock-script " +
                                q(testing::data() / "mock/resume_phase2.json"));
    REQUIRE_MESSAGE(second.status == 0, second.out);
    const auto summary = second.out.find("Prior summary:");
    const auto step1 = second.out.find("[step 1]");
    REQUIRE(summary != std::string::npos);
    REQUIRE(step1 != std::string::npos);
    CHECK(summary < step1);
    CHECK(second.out.find("fig_") != std::string::npos);
    CHECK(last_line(second.out).substr(8) != run_id);
}

TEST_CASE("cli: eval over two tasks writes an index") {
    testing::TempDir dir("cli_eval");
    const auto p = run_cli("eval --tasks " + q(testing::data() / "tasks25.json") + " --task 2 --task 20 --out " +
                           q(dir / "out") + " --mock-dir " + q(testing::data() / "mock"));
    CHECK_MESSAGE(p.status == 0, p.out);
    const auto idx = json::parse(testing::slurp(dir / "out/index.json"));
    REQUIRE(idx["tasks"].size() == 2);
    CHECK(idx["tasks"][0]["task_id"] == 2);
    CHECK(idx["tasks"][1]["task_id"] == 20);
    for (const auto& t : idx["tasks"]) CHECK(t["status"] == "ok");
}

TEST_CASE("cli: report prints the aggregate rates") {
    testing::TempDir dir("cli_report");
    const auto p = run_cli("report --grades " + q(testing::data() / "grades/reference") + " --tasks " +
                           q(testing::data() / "tasks25.json") + " --out " + q(dir / "rep"));
    CHECK_MESSAGE(p.status == 0, p.out);
    CHECK(p.out.find("gpt-4o / mdcrow: 72") != std::string::npos);
    CHECK(p.out.find("llama3-405b / mdcrow: 68") != std::string::npos);
    CHECK(p.out.find("gpt-4o / react_interpreter: 28") != std::string::npos);
}

TEST_CASE("http: message, ordered event stream, then resume") {
    Service s;
    s.queue.scripts = {mock_script("resume_phase1.json"), mock_script("resume_phase2.json")};
    const auto id = s.create();
    CHECK(s.post("/sessions/" + id + "/messages", {{"text", "simulate 1VII"}}).status == 202);
    const auto stream = s.get("/sessions/" + id + "/events?cursor=0");
    REQUIRE(stream.status == 200);
    const auto events = sse_events(stream.body);
    REQUIRE(events.size() >= 3);
    CHECK(events.front()["type"] == "run_started");
    CHECK(events.back()["type"] == "final");
    CHECK(events.back()["outcome"] == "final_answer");
    int last_step = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i]["seq"] == i);
        if (events[i]["type"] == "step") {
            const int n = events[i]["step"]["index"].get<int>();
            CHECK(n == last_step + 1);
            last_step = n;
        }
    }
    CHECK(last_step >= 1);
    const auto run_id = events.back()["run_id"].get<std::string>();

    // Nothing follows the terminal event.
    const auto after = s.get("/sessions/" + id + "/events?cursor=" + std::to_string(events.size()));
    CHECK(sse_events(after.body).empty());

    const auto files = json::parse(s.get("/sessions/" + id + "/files").body);
    REQUIRE(files["files"].size() >= 3);
    const auto fid = files["files"][0]["file_id"].get<std::string>();
    const auto payload = s.get("/sessions/" + id + "/files/" + fid);
    CHECK(payload.status == 200);
    CHECK(payload.body.find("ATOM") != std::string::npos);
    const auto summary = json::parse(s.get("/sessions/" + id + "/summary").body);
    CHECK(summary["run_id"] == run_id);
    CHECK_FALSE(summary["summary"].get<std::string>().empty());

    // A new session on the finished run: first event carries the summary.
    const auto resumed = s.create(run_id);
    CHECK(s.post("/sessions/" + resumed + "/messages", {{"text", "plot the RMSD"}}).status == 202);
    const auto r = sse_events(s.get("/sessions/" + resumed + "/events").body);
    REQUIRE(r.size() >= 3);
    CHECK(r[0]["type"] == "resumed");
    CHECK(r[0]["summary"] == summary["summary"]);
    CHECK(r.back()["type"] == "final");
    CHECK(r.back()["outcome"] == "final_answer");
    const auto cp = registry::load_checkpoint(s.dir / "runs", r.back()["run_id"].get<std::string>(), s.dir / "chk");
    CHECK(cp.checkpoint.parent_run == run_id);
}

TEST_CASE("http: busy session answers 409, partial checkpoint is loadable") {
    auto gate = std::make_shared<GateModel>(testing::call_block("PDBFileDownloader", "1LYZ"));
    Service s([gate](const std::string&) { return gate; });
    const auto id = s.create();
    CHECK(s.post("/sessions/" + id + "/messages", {{"text", "download 1LYZ"}}).status == 202);
    gate->wait_blocked();
    const auto busy = s.post("/sessions/" + id + "/messages", {{"text", "again"}});
    CHECK(busy.status == 409);
    CHECK(json::parse(busy.body).contains("error"));

    const auto info = json::parse(s.get("/sessions/" + id).body);
    CHECK(info["status"] == "running");
    REQUIRE(info["active_run"].is_string());
    const auto partial =
        registry::load_checkpoint(s.dir / "runs", info["active_run"].get<std::string>(), s.dir / "peek");
    REQUIRE(partial.checkpoint.files.size() == 1);
    CHECK(partial.checkpoint.files[0].file_id == "str_0001");
    CHECK(partial.checkpoint.trace.steps.size() == 1);

    gate->release();
    s.svc->wait_idle(id);
    const auto events = sse_events(s.get("/sessions/" + id + "/events").body);
    CHECK(events.back()["type"] == "final");
}

TEST_CASE("http: unknown ids and bad bodies") {
    Service s;
    CHECK(s.get("/sessions/nope").status == 404);
    CHECK(s.get("/sessions/nope/events").status == 404);
    CHECK(s.post("/sessions/nope/messages", {{"text", "x"}}).status == 404);
    CHECK(s.post("/sessions", {{"run_id", "doesnotexist"}}).status == 404);
    const auto id = s.create();
    CHECK(s.post("/sessions/" + id + "/messages", json::object()).status == 400);
    CHECK(s.get("/sessions/" + id + "/files/str_9999").status == 404);
    const auto summary = json::parse(s.get("/sessions/" + id + "/summary").body);
    CHECK(summary["summary"].is_null());
}

TEST_CASE("service: failing model ends the run with an error event") {
    Service s([](const std::string&) -> std::shared_ptr<llm::ChatModel> {
        return std::make_shared<llm::ScriptedModel>(std::vector<std::string>{}, "mock");
    });
    const auto id = s.svc->create_session()["session_id"].get<std::string>();
    s.svc->post_message(id, "hello");
    s.svc->wait_idle(id);
    const auto events = s.svc->events(id, 0);
    CHECK(events.back()["type"] == "final");
    CHECK(events.back()["outcome"] == "unrecoverable_error");
    CHECK(s.svc->stream_finished(id, events.size()));
    CHECK_THROWS_AS(s.svc->post_message(id, "  "), UsageError);
}
