#pragma once

#include "mdcrow/common/error.hpp"
#include "mdcrow/service/session.hpp"

#include <json.hpp>

#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace mdcrow::service {

// A message arrived while the session's run is still going.
class ConflictError : public Error {
public:
    using Error::Error;
};

enum class SessionStatus { idle, running, awaiting_user };
std::string to_string(SessionStatus s);

struct ServiceConfig {
    fs::path checkpoint_root;
    fs::path work_root;
    // One model per run; the message text is passed for scripted setups.
    std::function<std::shared_ptr<llm::ChatModel>(const std::string& message)> model_factory;
    agent::AgentConfig agent;
    bool llm_summary = true;
    std::shared_ptr<Clock> clock;     // null: system clock
    std::shared_ptr<IdSource> ids;    // null: random ids; calls are serialized
    ContextFactory make_context;      // null: fixture_context
};

/// Chat sessions over checkpointed runs. Each session runs one agent at a
/// time on a worker thread; events are appended in order and never removed.
///
/// Event types: "resumed" (prior summary), "run_started", "step",
/// "final" (terminal for a run: outcome, answer, summary, run id).
class SessionService {
public:
    explicit SessionService(ServiceConfig config);
    ~SessionService();
    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    // NotFoundError for an unknown run id.
    nlohmann::json create_session(const std::optional<std::string>& run_id = std::nullopt);
    nlohmann::json describe(const std::string& session_id) const;

    // Starts a run; ConflictError while one is active.
    nlohmann::json post_message(const std::string& session_id, const std::string& text);

    // Events with seq >= cursor, waiting up to `wait_s` for at least one.
    std::vector<nlohmann::json> events(const std::string& session_id, std::size_t cursor, double wait_s = 0.0) const;
    // True once a run is over and every event up to `cursor` was consumed.
    bool stream_finished(const std::string& session_id, std::size_t cursor) const;

    nlohmann::json files(const std::string& session_id) const;
    // Path of a file payload inside the checkpoint folder.
    fs::path file_path(const std::string& session_id, const std::string& file_id) const;
    nlohmann::json summary(const std::string& session_id) const;

    // Blocks until the session has no active run.
    void wait_idle(const std::string& session_id) const;

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& session_id) const;
    void worker(std::shared_ptr<Session> s, std::string text, std::optional<std::string> resume_from);

    ServiceConfig config_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::unique_ptr<IdSource> session_ids_;
};

/// HTTP front end of a SessionService.
///
///   POST /sessions                       {"run_id"?}        -> 201 session
///   GET  /sessions/{id}                                     -> session
///   POST /sessions/{id}/messages         {"text"}           -> 202 | 409
///   GET  /sessions/{id}/events?cursor=N  server-sent events -> closes after the terminal event
///   GET  /sessions/{id}/files                               -> file listing
///   GET  /sessions/{id}/files/{file_id}                     -> payload bytes
///   GET  /sessions/{id}/summary                             -> latest summary
///
/// Errors are {"error": text} with 400, 404 or 409.
class HttpServer {
public:
    explicit HttpServer(SessionService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Listens on a background thread; port 0 picks a free port. Returns the port.
    int start(const std::string& host, int port);
    // Blocks until stop() (or a signal) ends the server.
    void run(const std::string& host, int port, const std::function<void(int port)>& on_listen = nullptr);
    void stop();

private:
    void mount();
    SessionService& service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

} // namespace mdcrow::service
