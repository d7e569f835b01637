#pragma once

#include "mdcrow/common/clock.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/http.hpp"

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace mdcrow::llm {

enum class Role { system, user, assistant };
std::string to_string(Role r);
Role parse_role(std::string_view s);

struct ChatMessage {
    Role role;
    std::string content;
    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

enum class Provider { openai_style, anthropic_style, fireworks_style, mock };
std::string to_string(Provider p);
Provider parse_provider(std::string_view s);

struct ModelConfig {
    Provider provider = Provider::mock;
    std::string model_id = "mock";
    double temperature = 0.0;
    int max_tokens = 4096;
    std::string api_base;         // empty: provider default
    std::string credentials_env;  // environment variable holding the key; empty: provider default
    std::string script_path;      // mock: JSON array of completions or a recorded transcript
    std::string quantization;     // metadata only
};

class LlmError : public Error {
public:
    using Error::Error;
};

// Bad or missing credentials. Never retried.
class AuthError : public LlmError {
public:
    using LlmError::LlmError;
};

// Retries exhausted or a non-retryable provider response.
class GatewayFailure : public LlmError {
public:
    using LlmError::LlmError;
};

class ScriptExhausted : public LlmError {
public:
    using LlmError::LlmError;
};

/// One JSON line per outbound request.
struct AuditRecord {
    std::string timestamp;
    std::string model_id;
    std::string provider;
    int attempt = 1;
    int status = 0;
    std::string outcome;  // ok | retry | auth_error | failed | exhausted
    long long prompt_tokens = 0;
    long long completion_tokens = 0;
    double latency_ms = 0.0;
    std::string error;
};

class AuditLog {
public:
    AuditLog() = default;
    explicit AuditLog(std::string path) : path_(std::move(path)) {}
    void append(const AuditRecord& r);
    std::vector<AuditRecord> records() const;
    static std::string to_json_line(const AuditRecord& r);

private:
    std::string path_;
    mutable std::mutex mu_;
    std::vector<AuditRecord> records_;
};

class ChatModel {
public:
    virtual ~ChatModel() = default;
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
    virtual std::string model_id() const = 0;
};

// Checks the message-list precondition shared by every model.
void check_messages(const std::vector<ChatMessage>& messages);

/// Returns canned completions in order; single consumer.
class ScriptedModel final : public ChatModel {
public:
    explicit ScriptedModel(std::vector<std::string> script, std::string id = "mock",
                           std::shared_ptr<AuditLog> audit = nullptr, std::shared_ptr<Clock> clock = nullptr);

    std::string complete(const std::vector<ChatMessage>& messages) override;
    std::string model_id() const override { return id_; }

    std::string next_scripted_response();
    std::size_t remaining() const { return script_.size(); }
    // Prompts seen so far, for tests.
    const std::vector<std::vector<ChatMessage>>& requests() const { return requests_; }

private:
    std::deque<std::string> script_;
    std::string id_;
    std::shared_ptr<AuditLog> audit_;
    std::shared_ptr<Clock> clock_;
    std::vector<std::vector<ChatMessage>> requests_;
};

using Sleeper = std::function<void(double seconds)>;

struct RetryPolicy {
    int attempts = 3;
    double initial_backoff = 1.0;  // seconds, doubled after each failure
};

/// HTTP chat-completion client for the OpenAI, Anthropic and Fireworks wire
/// formats.
class RemoteModel final : public ChatModel {
public:
    RemoteModel(ModelConfig config, std::shared_ptr<HttpClient> http, std::shared_ptr<AuditLog> audit,
                Sleeper sleeper = nullptr, std::shared_ptr<Clock> clock = nullptr,
                std::function<std::optional<std::string>(const std::string&)> env = nullptr);

    std::string complete(const std::vector<ChatMessage>& messages) override;
    std::string model_id() const override { return config_.model_id; }

    // Request URL, headers and JSON body for a provider (exposed for tests).
    struct WireRequest {
        std::string url;
        HttpHeaders headers;
        std::string body;
    };
    WireRequest build_request(const std::vector<ChatMessage>& messages, const std::string& key) const;
    struct WireResponse {
        std::string text;
        long long prompt_tokens = 0;
        long long completion_tokens = 0;
    };
    WireResponse parse_response(const std::string& body) const;

    RetryPolicy retry;

private:
    ModelConfig config_;
    std::shared_ptr<HttpClient> http_;
    std::shared_ptr<AuditLog> audit_;
    Sleeper sleeper_;
    std::shared_ptr<Clock> clock_;
    std::function<std::optional<std::string>(const std::string&)> env_;
};

/// Records every exchange of an inner model to a transcript file.
class RecordingModel final : public ChatModel {
public:
    RecordingModel(std::shared_ptr<ChatModel> inner, std::string transcript_path);
    std::string complete(const std::vector<ChatMessage>& messages) override;
    std::string model_id() const override { return inner_->model_id(); }

private:
    std::shared_ptr<ChatModel> inner_;
    std::string path_;
};

/// Replays a transcript written by RecordingModel, completion by completion.
class ReplayModel final : public ChatModel {
public:
    explicit ReplayModel(const std::string& transcript_path, std::shared_ptr<AuditLog> audit = nullptr);
    std::string complete(const std::vector<ChatMessage>& messages) override;
    std::string model_id() const override { return id_; }
    std::size_t remaining() const { return completions_.size() - next_; }

private:
    std::vector<std::string> completions_;
    std::size_t next_ = 0;
    std::string id_ = "replay";
    std::shared_ptr<AuditLog> audit_;
};

// Completions of a mock script file: a JSON array of strings, or a
// transcript (JSON lines with a "completion" field).
std::vector<std::string> load_script(const std::string& path);

// Model config document: {"provider", "model_id", "temperature", "max_tokens",
// "api_base", "credentials_env", "script_path", "quantization"}; only
// "provider" is required. Relative script paths resolve against base_dir.
ModelConfig model_config_from_json(std::string_view text, const std::string& base_dir = "");
ModelConfig load_model_config(const std::string& path);

std::string default_api_base(Provider p);
std::string default_credentials_env(Provider p);

// Builds the model a config describes.
std::shared_ptr<ChatModel> make_model(const ModelConfig& config, std::shared_ptr<AuditLog> audit,
                                      std::shared_ptr<HttpClient> http = nullptr);

// Single completion through a freshly built model.
std::string complete_chat(const std::vector<ChatMessage>& messages, const ModelConfig& config,
                          std::shared_ptr<AuditLog> audit = nullptr);

long long estimate_tokens(std::string_view text);

} // namespace mdcrow::llm
