#include "mdcrow/llm/gateway.hpp"

#include "mdcrow/common/strings.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace mdcrow::llm {

using nlohmann::json;

std::string to_string(Role r) {
    switch (r) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
    }
    return "user";
}

Role parse_role(std::string_view s) {
    if (s == "system") return Role::system;
    if (s == "user") return Role::user;
    if (s == "assistant") return Role::assistant;
    throw ParseError("unknown chat role '" + std::string(s) + "'");
}

std::string to_string(Provider p) {
    switch (p) {
        case Provider::openai_style: return "openai_style";
        case Provider::anthropic_style: return "anthropic_style";
        case Provider::fireworks_style: return "fireworks_style";
        case Provider::mock: return "mock";
    }
    return "mock";
}

Provider parse_provider(std::string_view s) {
    auto l = to_lower(s);
    if (l == "openai_style" || l == "openai") return Provider::openai_style;
    if (l == "anthropic_style" || l == "anthropic") return Provider::anthropic_style;
    if (l == "fireworks_style" || l == "fireworks") return Provider::fireworks_style;
    if (l == "mock") return Provider::mock;
    throw UsageError("unknown provider '" + std::string(s) +
                     "' (expected openai_style, anthropic_style, fireworks_style or mock)");
}

std::string default_api_base(Provider p) {
    switch (p) {
        case Provider::openai_style: return "https://api.openai.com/v1";
        case Provider::anthropic_style: return "https://api.anthropic.com";
        case Provider::fireworks_style: return "https://api.fireworks.ai/inference/v1";
        case Provider::mock: return "";
    }
    return "";
}

std::string default_credentials_env(Provider p) {
    switch (p) {
        case Provider::openai_style: return "OPENAI_API_KEY";
        case Provider::anthropic_style: return "ANTHROPIC_API_KEY";
        case Provider::fireworks_style: return "FIREWORKS_API_KEY";
        case Provider::mock: return "";
    }
    return "";
}

long long estimate_tokens(std::string_view text) { return static_cast<long long>((text.size() + 3) / 4); }

void check_messages(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) throw UsageError("chat completion needs at least one message");
    if (messages.front().role != Role::system) throw UsageError("the first chat message must have role system");
    for (const auto& m : messages)
        if (m.content.empty()) throw UsageError("chat messages must have non-empty content");
}

namespace {

long long prompt_tokens(const std::vector<ChatMessage>& messages) {
    long long n = 0;
    for (const auto& m : messages) n += estimate_tokens(m.content);
    return n;
}

} // namespace

// ---- audit ----------------------------------------------------------------

std::string AuditLog::to_json_line(const AuditRecord& r) {
    json j{{"timestamp", r.timestamp}, {"model_id", r.model_id}, {"provider", r.provider},
           {"attempt", r.attempt},     {"status", r.status},     {"outcome", r.outcome},
           {"prompt_tokens", r.prompt_tokens}, {"completion_tokens", r.completion_tokens},
           {"latency_ms", r.latency_ms}};
    if (!r.error.empty()) j["error"] = r.error;
    return j.dump();
}

void AuditLog::append(const AuditRecord& r) {
    std::lock_guard lock(mu_);
    records_.push_back(r);
    if (!path_.empty()) {
        std::ofstream out(path_, std::ios::app);
        if (!out) throw PersistenceError("cannot append to audit log " + path_);
        out << to_json_line(r) << "\n";
    }
}

std::vector<AuditRecord> AuditLog::records() const {
    std::lock_guard lock(mu_);
    return records_;
}

// ---- scripted mock --------------------------------------------------------

ScriptedModel::ScriptedModel(std::vector<std::string> script, std::string id, std::shared_ptr<AuditLog> audit,
                             std::shared_ptr<Clock> clock)
    : script_(script.begin(), script.end()), id_(std::move(id)), audit_(std::move(audit)), clock_(std::move(clock)) {}

std::string ScriptedModel::next_scripted_response() {
    if (script_.empty()) throw ScriptExhausted("script exhausted");
    std::string s = std::move(script_.front());
    script_.pop_front();
    return s;
}

std::string ScriptedModel::complete(const std::vector<ChatMessage>& messages) {
    check_messages(messages);
    requests_.push_back(messages);
    AuditRecord r;
    r.timestamp = clock_ ? clock_->iso_timestamp() : "";
    r.model_id = id_;
    r.provider = "mock";
    r.prompt_tokens = prompt_tokens(messages);
    try {
        auto text = next_scripted_response();
        r.status = 200;
        r.outcome = "ok";
        r.completion_tokens = estimate_tokens(text);
        if (audit_) audit_->append(r);
        return text;
    } catch (const ScriptExhausted& e) {
        r.outcome = "exhausted";
        r.error = e.what();
        if (audit_) audit_->append(r);
        throw;
    }
}

// ---- remote providers -----------------------------------------------------

RemoteModel::RemoteModel(ModelConfig config, std::shared_ptr<HttpClient> http, std::shared_ptr<AuditLog> audit,
                         Sleeper sleeper, std::shared_ptr<Clock> clock,
                         std::function<std::optional<std::string>(const std::string&)> env)
    : config_(std::move(config)), http_(std::move(http)), audit_(std::move(audit)), sleeper_(std::move(sleeper)),
      clock_(std::move(clock)), env_(std::move(env)) {
    if (config_.provider == Provider::mock) throw UsageError("RemoteModel cannot serve the mock provider");
    if (!http_) http_ = make_http_client();
    if (!audit_) audit_ = std::make_shared<AuditLog>();
    if (!sleeper_)
        sleeper_ = [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
    if (!clock_) clock_ = default_clock();
    if (!env_)
        env_ = [](const std::string& name) -> std::optional<std::string> {
            const char* v = std::getenv(name.c_str());
            if (!v || !*v) return std::nullopt;
            return std::string(v);
        };
    if (config_.api_base.empty()) config_.api_base = default_api_base(config_.provider);
    if (config_.credentials_env.empty()) config_.credentials_env = default_credentials_env(config_.provider);
}

RemoteModel::WireRequest RemoteModel::build_request(const std::vector<ChatMessage>& messages,
                                                    const std::string& key) const {
    WireRequest w;
    std::string base = config_.api_base;
    while (!base.empty() && base.back() == '/') base.pop_back();
    if (config_.provider == Provider::anthropic_style) {
        json msgs = json::array();
        std::string system;
        for (const auto& m : messages) {
            if (m.role == Role::system) {
                system += (system.empty() ? "" : "\n\n") + m.content;
            } else {
                msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
            }
        }
        json body{{"model", config_.model_id},
                  {"max_tokens", config_.max_tokens},
                  {"temperature", config_.temperature},
                  {"system", system},
                  {"messages", msgs}};
        w.url = base + "/v1/messages";
        w.headers = {{"x-api-key", key}, {"anthropic-version", "2023-06-01"}};
        w.body = body.dump();
    } else {
        json msgs = json::array();
        for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
        json body{{"model", config_.model_id},
                  {"max_tokens", config_.max_tokens},
                  {"temperature", config_.temperature},
                  {"messages", msgs}};
        w.url = base + "/chat/completions";
        w.headers = {{"Authorization", "Bearer " + key}};
        w.body = body.dump();
    }
    return w;
}

RemoteModel::WireResponse RemoteModel::parse_response(const std::string& body) const {
    WireResponse out;
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw GatewayFailure(std::string("provider returned invalid JSON: ") + e.what());
    }
    try {
        if (config_.provider == Provider::anthropic_style) {
            for (const auto& block : j.at("content"))
                if (block.value("type", "text") == "text") out.text += block.at("text").get<std::string>();
            if (j.contains("usage")) {
                out.prompt_tokens = j["usage"].value("input_tokens", 0LL);
                out.completion_tokens = j["usage"].value("output_tokens", 0LL);
            }
        } else {
            const auto& msg = j.at("choices").at(0).at("message");
            out.text = msg.at("content").is_null() ? "" : msg.at("content").get<std::string>();
            if (j.contains("usage")) {
                out.prompt_tokens = j["usage"].value("prompt_tokens", 0LL);
                out.completion_tokens = j["usage"].value("completion_tokens", 0LL);
            }
        }
    } catch (const json::exception& e) {
        throw GatewayFailure(std::string("unexpected provider response shape: ") + e.what());
    }
    return out;
}

std::string RemoteModel::complete(const std::vector<ChatMessage>& messages) {
    check_messages(messages);
    AuditRecord base;
    base.model_id = config_.model_id;
    base.provider = to_string(config_.provider);
    base.prompt_tokens = prompt_tokens(messages);

    auto key = env_(config_.credentials_env);
    if (!key) {
        AuditRecord r = base;
        r.timestamp = clock_->iso_timestamp();
        r.outcome = "auth_error";
        r.error = "missing credentials in $" + config_.credentials_env;
        audit_->append(r);
        throw AuthError("no API key: set the environment variable " + config_.credentials_env);
    }
    const auto req = build_request(messages, *key);

    double backoff = retry.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= retry.attempts; ++attempt) {
        AuditRecord r = base;
        r.attempt = attempt;
        r.timestamp = clock_->iso_timestamp();
        const auto t0 = std::chrono::steady_clock::now();
        HttpResponse resp = http_->post(req.url, req.body, "application/json", req.headers);
        r.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        r.status = resp.status;

        if (resp.status == 401 || resp.status == 403) {
            r.outcome = "auth_error";
            r.error = "HTTP " + std::to_string(resp.status);
            audit_->append(r);
            throw AuthError("provider rejected the credentials (HTTP " + std::to_string(resp.status) + ")");
        }
        if (resp.status >= 200 && resp.status < 300) {
            try {
                auto parsed = parse_response(resp.body);
                r.outcome = "ok";
                r.prompt_tokens = parsed.prompt_tokens ? parsed.prompt_tokens : r.prompt_tokens;
                r.completion_tokens = parsed.completion_tokens ? parsed.completion_tokens
                                                               : estimate_tokens(parsed.text);
                audit_->append(r);
                return parsed.text;
            } catch (const GatewayFailure& e) {
                r.outcome = "failed";
                r.error = e.what();
                audit_->append(r);
                throw;
            }
        }
        const bool transient = resp.status == 0 || resp.status == 408 || resp.status == 429 || resp.status >= 500;
        last_error = resp.status == 0 ? resp.error : "HTTP " + std::to_string(resp.status) + ": " +
                                                         resp.body.substr(0, 200);
        r.error = last_error;
        if (!transient) {
            r.outcome = "failed";
            audit_->append(r);
            throw GatewayFailure("provider request failed: " + last_error);
        }
        r.outcome = attempt < retry.attempts ? "retry" : "failed";
        audit_->append(r);
        if (attempt < retry.attempts) {
            sleeper_(backoff);
            backoff *= 2;
        }
    }
    throw GatewayFailure("provider unreachable after " + std::to_string(retry.attempts) + " attempts: " + last_error);
}

// ---- record / replay --------------------------------------------------------

RecordingModel::RecordingModel(std::shared_ptr<ChatModel> inner, std::string transcript_path)
    : inner_(std::move(inner)), path_(std::move(transcript_path)) {}

std::string RecordingModel::complete(const std::vector<ChatMessage>& messages) {
    auto text = inner_->complete(messages);
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    json line{{"model_id", inner_->model_id()}, {"messages", msgs}, {"completion", text}};
    std::ofstream out(path_, std::ios::app);
    if (!out) throw PersistenceError("cannot write transcript " + path_);
    out << line.dump() << "\n";
    return text;
}

std::vector<std::string> load_script(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::string> out;
    const auto first = trim(text);
    try {
        if (!first.empty() && first.front() == '[') {
            for (const auto& item : json::parse(first)) out.push_back(item.get<std::string>());
            return out;
        }
        for (const auto& line : split(text, '\n')) {
            if (trim(line).empty()) continue;
            out.push_back(json::parse(line).at("completion").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ParseError("malformed mock script " + path + ": " + e.what());
    }
    return out;
}

ReplayModel::ReplayModel(const std::string& transcript_path, std::shared_ptr<AuditLog> audit)
    : completions_(load_script(transcript_path)), audit_(std::move(audit)) {
    const auto text = read_file(transcript_path);
    const auto lines = split(text, '\n');
    if (!lines.empty() && !trim(lines[0]).empty() && trim(lines[0]).front() == '{') {
        try {
            id_ = json::parse(lines[0]).value("model_id", std::string("replay"));
        } catch (const json::exception&) {
        }
    }
}

std::string ReplayModel::complete(const std::vector<ChatMessage>& messages) {
    check_messages(messages);
    AuditRecord r;
    r.model_id = id_;
    r.provider = "mock";
    r.prompt_tokens = prompt_tokens(messages);
    if (next_ >= completions_.size()) {
        r.outcome = "exhausted";
        r.error = "script exhausted";
        if (audit_) audit_->append(r);
        throw ScriptExhausted("script exhausted");
    }
    r.status = 200;
    r.outcome = "ok";
    r.completion_tokens = estimate_tokens(completions_[next_]);
    if (audit_) audit_->append(r);
    return completions_[next_++];
}

ModelConfig model_config_from_json(std::string_view text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model config is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("provider")) throw ParseError("model config needs a \"provider\" field");
    try {
        ModelConfig c;
        try {
            c.provider = parse_provider(j.at("provider").get<std::string>());
        } catch (const UsageError& e) {
            throw ParseError(e.what());
        }
        c.model_id = j.value("model_id", c.provider == Provider::mock ? std::string("mock") : std::string());
        if (c.model_id.empty()) throw ParseError("model config needs a \"model_id\"");
        c.temperature = j.value("temperature", c.temperature);
        c.max_tokens = j.value("max_tokens", c.max_tokens);
        c.api_base = j.value("api_base", std::string());
        c.credentials_env = j.value("credentials_env", std::string());
        c.script_path = j.value("script_path", std::string());
        c.quantization = j.value("quantization", std::string());
        if (!c.script_path.empty() && !base_dir.empty() && std::filesystem::path(c.script_path).is_relative())
            c.script_path = (std::filesystem::path(base_dir) / c.script_path).string();
        if (c.max_tokens <= 0) throw ParseError("max_tokens must be positive");
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model config field has the wrong type: ") + e.what());
    }
}

ModelConfig load_model_config(const std::string& path) {
    return model_config_from_json(read_file(path), std::filesystem::path(path).parent_path().string());
}

std::shared_ptr<ChatModel> make_model(const ModelConfig& config, std::shared_ptr<AuditLog> audit,
                                      std::shared_ptr<HttpClient> http) {
    if (config.provider == Provider::mock) {
        if (config.script_path.empty()) throw UsageError("the mock provider needs a script file");
        return std::make_shared<ScriptedModel>(load_script(config.script_path), config.model_id, std::move(audit));
    }
    return std::make_shared<RemoteModel>(config, std::move(http), std::move(audit));
}

std::string complete_chat(const std::vector<ChatMessage>& messages, const ModelConfig& config,
                          std::shared_ptr<AuditLog> audit) {
    return make_model(config, std::move(audit))->complete(messages);
}

} // namespace mdcrow::llm
