#include "mdcrow/service/server.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "mdcrow/agent/trace.hpp"
#include "mdcrow/common/strings.hpp"

#include <chrono>

namespace mdcrow::service {

using nlohmann::json;

std::string to_string(SessionStatus s) {
    switch (s) {
    case SessionStatus::idle: return "idle";
    case SessionStatus::running: return "running";
    case SessionStatus::awaiting_user: return "awaiting_user";
    }
    return "idle";
}

namespace {

// Runs of different sessions share these.
class LockedClock final : public Clock {
public:
    explicit LockedClock(std::shared_ptr<Clock> inner) : inner_(std::move(inner)) {}
    double now_seconds() override {
        std::lock_guard lk(mu_);
        return inner_->now_seconds();
    }
    std::string iso_timestamp() override {
        std::lock_guard lk(mu_);
        return inner_->iso_timestamp();
    }

private:
    std::shared_ptr<Clock> inner_;
    std::mutex mu_;
};

class LockedIds final : public IdSource {
public:
    explicit LockedIds(std::shared_ptr<IdSource> inner) : inner_(std::move(inner)) {}
    std::string next_run_id() override {
        std::lock_guard lk(mu_);
        return inner_->next_run_id();
    }

private:
    std::shared_ptr<IdSource> inner_;
    std::mutex mu_;
};

json file_json(const registry::FileEntry& e) {
    return {{"file_id", e.file_id},
            {"kind", registry::to_string(e.kind)},
            {"description", e.description},
            {"created_at_step", e.created_at_step},
            {"name", fs::path(e.path).filename().string()},
            {"missing", e.missing}};
}

std::string content_type(const fs::path& p) {
    const auto ext = to_lower(p.extension().string());
    if (ext == ".ppm") return "image/x-portable-pixmap";
    if (ext == ".csv") return "text/csv";
    if (ext == ".pdb") return "chemical/x-pdb";
    if (ext == ".json") return "application/json";
    if (ext == ".txt" || ext == ".mdscript" || ext == ".py" || ext == ".md") return "text/plain; charset=utf-8";
    return "application/octet-stream";
}

} // namespace

struct SessionService::Session {
    std::string id;
    mutable std::mutex mu;
    mutable std::condition_variable cv;
    SessionStatus status = SessionStatus::idle;
    std::vector<std::string> run_ids;  // lineage, oldest first
    std::string active_run;
    std::vector<json> events;
    std::optional<registry::RunSummary> summary;
    std::string summary_run;
    std::thread thread;

    void push(json e) {
        {
            std::lock_guard lk(mu);
            e["seq"] = events.size();
            events.push_back(std::move(e));
        }
        cv.notify_all();
    }
};

SessionService::SessionService(ServiceConfig config)
    : config_(std::move(config)), session_ids_(std::make_unique<RandomIdSource>()) {
    if (!config_.model_factory) throw UsageError("the session service needs a model factory");
    if (config_.checkpoint_root.empty() || config_.work_root.empty())
        throw UsageError("the session service needs a checkpoint root and a work root");
    fs::create_directories(config_.checkpoint_root);
    fs::create_directories(config_.work_root);
    config_.clock = std::make_shared<LockedClock>(config_.clock ? config_.clock : default_clock());
    config_.ids = std::make_shared<LockedIds>(config_.ids ? config_.ids : std::make_shared<RandomIdSource>());
}

SessionService::~SessionService() {
    std::vector<std::shared_ptr<Session>> all;
    {
        std::lock_guard lk(mu_);
        for (auto& [_, s] : sessions_) all.push_back(s);
    }
    for (auto& s : all)
        if (s->thread.joinable()) s->thread.join();
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& session_id) const {
    std::lock_guard lk(mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) throw NotFoundError("unknown session '" + session_id + "'");
    return it->second;
}

json SessionService::create_session(const std::optional<std::string>& run_id) {
    auto s = std::make_shared<Session>();
    if (run_id) {
        const auto known = registry::list_checkpoints(config_.checkpoint_root);
        if (std::find(known.begin(), known.end(), *run_id) == known.end())
            throw NotFoundError("unknown run id '" + *run_id + "'");
        auto cp = registry::parse_manifest(read_file((config_.checkpoint_root / *run_id / "manifest").string()));
        s->run_ids.push_back(*run_id);
        s->summary = cp.summary;
        s->summary_run = *run_id;
        json files = json::array();
        for (const auto& e : cp.files) files.push_back(file_json(e));
        s->push({{"type", "resumed"}, {"run_id", *run_id}, {"summary", cp.summary.text}, {"files", files}});
    }
    {
        std::lock_guard lk(mu_);
        do s->id = session_ids_->next_run_id();
        while (sessions_.count(s->id));
        sessions_[s->id] = s;
    }
    return describe(s->id);
}

json SessionService::describe(const std::string& session_id) const {
    auto s = find(session_id);
    std::lock_guard lk(s->mu);
    return {{"session_id", s->id},
            {"status", to_string(s->status)},
            {"run_ids", s->run_ids},
            {"active_run", s->active_run.empty() ? json(nullptr) : json(s->active_run)},
            {"cursor", s->events.size()}};
}

json SessionService::post_message(const std::string& session_id, const std::string& text) {
    if (trim(text).empty()) throw UsageError("message text must not be empty");
    auto s = find(session_id);
    std::optional<std::string> resume_from;
    {
        std::lock_guard lk(s->mu);
        if (s->status == SessionStatus::running)
            throw ConflictError("session '" + session_id + "' is busy with a run");
        s->status = SessionStatus::running;
        if (!s->run_ids.empty()) resume_from = s->run_ids.back();
    }
    if (s->thread.joinable()) s->thread.join();
    s->push({{"type", "run_started"}, {"message", text}});
    s->thread = std::thread([this, s, text, resume_from] { worker(s, text, resume_from); });
    return describe(session_id);
}

void SessionService::worker(std::shared_ptr<Session> s, std::string text, std::optional<std::string> resume_from) {
    json final_event{{"type", "final"}};
    std::optional<RunResult> result;
    try {
        auto model = config_.model_factory(text);
        if (!model) throw UsageError("no language model available");
        RunEnvironment env;
        env.checkpoint_root = config_.checkpoint_root;
        env.work_root = config_.work_root;
        env.model = model.get();
        env.clock = config_.clock.get();
        env.ids = config_.ids.get();
        env.agent = config_.agent;
        env.llm_summary = config_.llm_summary;
        env.make_context = config_.make_context;
        SessionHooks hooks;
        hooks.on_start = [&](const std::string& run_id) {
            std::lock_guard lk(s->mu);
            s->active_run = run_id;
        };
        hooks.on_step = [&](const agent::TraceStep& step) {
            std::string run_id;
            {
                std::lock_guard lk(s->mu);
                run_id = s->active_run;
            }
            s->push({{"type", "step"}, {"run_id", run_id}, {"step", agent::to_json(step)}});
        };
        result = run_session({text, resume_from}, env, hooks);
        final_event["run_id"] = result->run_id;
        final_event["outcome"] = agent::to_string(result->trace.outcome);
        final_event["final_text"] = result->trace.final_text;
        final_event["error"] = result->trace.error;
        final_event["summary"] = result->summary.text;
    } catch (const std::exception& e) {
        final_event["outcome"] = agent::to_string(agent::Outcome::unrecoverable_error);
        final_event["error"] = e.what();
        std::lock_guard lk(s->mu);
        if (!s->active_run.empty()) final_event["run_id"] = s->active_run;
    }
    {
        std::lock_guard lk(s->mu);
        if (result) {
            s->run_ids.push_back(result->run_id);
            s->summary = result->summary;
            s->summary_run = result->run_id;
        } else if (!s->active_run.empty()) {
            s->run_ids.push_back(s->active_run);
        }
        s->active_run.clear();
        final_event["seq"] = s->events.size();
        s->events.push_back(final_event);
        s->status = SessionStatus::awaiting_user;
    }
    s->cv.notify_all();
}

std::vector<json> SessionService::events(const std::string& session_id, std::size_t cursor, double wait_s) const {
    auto s = find(session_id);
    std::unique_lock lk(s->mu);
    if (wait_s > 0)
        s->cv.wait_for(lk, std::chrono::duration<double>(wait_s), [&] {
            return s->events.size() > cursor || s->status != SessionStatus::running;
        });
    if (cursor >= s->events.size()) return {};
    return {s->events.begin() + static_cast<std::ptrdiff_t>(cursor), s->events.end()};
}

bool SessionService::stream_finished(const std::string& session_id, std::size_t cursor) const {
    auto s = find(session_id);
    std::lock_guard lk(s->mu);
    return s->status != SessionStatus::running && cursor >= s->events.size();
}

void SessionService::wait_idle(const std::string& session_id) const {
    auto s = find(session_id);
    std::unique_lock lk(s->mu);
    s->cv.wait(lk, [&] { return s->status != SessionStatus::running; });
}

namespace {

std::vector<registry::FileEntry> manifest_files(const fs::path& root, const std::string& run_id) {
    const auto manifest = root / run_id / "manifest";
    if (!fs::exists(manifest)) return {};
    auto files = registry::parse_manifest(read_file(manifest.string())).files;
    for (auto& e : files)
        if (!fs::exists(root / e.path)) e.missing = true;
    return files;
}

} // namespace

json SessionService::files(const std::string& session_id) const {
    auto s = find(session_id);
    std::string run_id;
    {
        std::lock_guard lk(s->mu);
        run_id = !s->active_run.empty() ? s->active_run : s->run_ids.empty() ? std::string() : s->run_ids.back();
    }
    json out{{"session_id", session_id}, {"run_id", run_id.empty() ? json(nullptr) : json(run_id)},
             {"files", json::array()}};
    if (!run_id.empty())
        for (const auto& e : manifest_files(config_.checkpoint_root, run_id)) out["files"].push_back(file_json(e));
    return out;
}

fs::path SessionService::file_path(const std::string& session_id, const std::string& file_id) const {
    const auto listing = files(session_id);
    if (listing["run_id"].is_null()) throw NotFoundError("session '" + session_id + "' has no files");
    const std::string run_id = listing["run_id"];
    for (const auto& e : manifest_files(config_.checkpoint_root, run_id)) {
        if (e.file_id != file_id) continue;
        if (e.missing) throw NotFoundError("payload of " + file_id + " is missing");
        return config_.checkpoint_root / e.path;
    }
    throw NotFoundError("unknown file id '" + file_id + "'");
}

json SessionService::summary(const std::string& session_id) const {
    auto s = find(session_id);
    std::lock_guard lk(s->mu);
    if (!s->summary) return {{"session_id", session_id}, {"run_id", nullptr}, {"summary", nullptr}};
    return {{"session_id", session_id},
            {"run_id", s->summary_run},
            {"summary", s->summary->text},
            {"from_llm", s->summary->from_llm}};
}

// ---------------------------------------------------------------- HTTP

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2, ' ', false, json::error_handler_t::replace), "application/json");
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const NotFoundError& e) {
        send_json(res, 404, {{"error", e.what()}});
    } catch (const ConflictError& e) {
        send_json(res, 409, {{"error", e.what()}});
    } catch (const UsageError& e) {
        send_json(res, 400, {{"error", e.what()}});
    } catch (const json::exception& e) {
        send_json(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    } catch (const std::exception& e) {
        send_json(res, 500, {{"error", e.what()}});
    }
}

json body_json(const httplib::Request& req) {
    if (trim(req.body).empty()) return json::object();
    auto j = json::parse(req.body);
    if (!j.is_object()) throw UsageError("request body must be a JSON object");
    return j;
}

std::string sse_frame(const json& e) {
    return "id: " + std::to_string(e.value("seq", 0)) + "\nevent: " + e.value("type", std::string("message")) +
           "\ndata: " + e.dump(-1, ' ', false, json::error_handler_t::replace) + "\n\n";
}

} // namespace

HttpServer::HttpServer(SessionService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    mount();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::mount() {
    auto& srv = *server_;
    SessionService* svc = &service_;
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
        res.status = 204;
    });

    srv.Post("/sessions", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = body_json(req);
            std::optional<std::string> run_id;
            if (body.contains("run_id") && !body["run_id"].is_null()) run_id = body["run_id"].get<std::string>();
            send_json(res, 201, svc->create_session(run_id));
        });
    });
    srv.Get(R"(/sessions/([^/]+))", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, svc->describe(req.matches[1])); });
    });
    srv.Post(R"(/sessions/([^/]+)/messages)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto body = body_json(req);
            if (!body.contains("text") || !body["text"].is_string()) throw UsageError("field 'text' is required");
            send_json(res, 202, svc->post_message(req.matches[1], body["text"].get<std::string>()));
        });
    });
    srv.Get(R"(/sessions/([^/]+)/events)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string id = req.matches[1];
            std::size_t cursor = 0;
            if (req.has_param("cursor"))
                cursor = static_cast<std::size_t>(parse_int(req.get_param_value("cursor"), "cursor"));
            else if (req.has_header("Last-Event-ID"))
                cursor = static_cast<std::size_t>(parse_int(req.get_header_value("Last-Event-ID"), "Last-Event-ID")) + 1;
            svc->describe(id);  // 404 before the stream opens
            auto pos = std::make_shared<std::size_t>(cursor);
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream", [svc, id, pos](std::size_t, httplib::DataSink& sink) {
                    try {
                        for (const auto& e : svc->events(id, *pos, 1.0)) {
                            const auto frame = sse_frame(e);
                            if (!sink.write(frame.data(), frame.size())) return false;
                            ++*pos;
                        }
                        if (svc->stream_finished(id, *pos)) sink.done();
                        return true;
                    } catch (const std::exception&) {
                        return false;
                    }
                });
        });
    });
    srv.Get(R"(/sessions/([^/]+)/files)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, svc->files(req.matches[1])); });
    });
    srv.Get(R"(/sessions/([^/]+)/files/([^/]+))", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto path = svc->file_path(req.matches[1], req.matches[2]);
            res.status = 200;
            res.set_content(read_file(path.string()), content_type(path));
        });
    });
    srv.Get(R"(/sessions/([^/]+)/summary)", [svc](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, svc->summary(req.matches[1])); });
    });
}

int HttpServer::start(const std::string& host, int port) {
    if (thread_.joinable()) throw UsageError("server already started");
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::run(const std::string& host, int port, const std::function<void(int)>& on_listen) {
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
    if (on_listen) on_listen(bound);
    server_->listen_after_bind();
}

void HttpServer::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

} // namespace mdcrow::service
