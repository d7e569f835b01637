#pragma once

#include <map>
#include <memory>
#include <string>

namespace mdcrow {

struct HttpResponse {
    int status = 0;      // 0 means transport failure
    std::string body;
    std::string error;   // transport error text when status == 0
};

using HttpHeaders = std::multimap<std::string, std::string>;

/// Outbound HTTP used by live-mode tools and remote LLM providers.
class HttpClient {
public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& url, const HttpHeaders& headers) = 0;
    virtual HttpResponse post(const std::string& url, const std::string& body,
                              const std::string& content_type, const HttpHeaders& headers) = 0;
};

std::shared_ptr<HttpClient> make_http_client(double timeout_seconds = 60.0);

// Refuses every request. Installed in fixture mode so that any network
// access is a hard error.
class NoNetworkClient final : public HttpClient {
public:
    HttpResponse get(const std::string& url, const HttpHeaders&) override;
    HttpResponse post(const std::string& url, const std::string&, const std::string&,
                      const HttpHeaders&) override;
    int attempts() const { return attempts_; }

private:
    int attempts_ = 0;
};

/// Replays recorded GET responses from a directory of JSON documents
/// {"url": ..., "status": ..., "body": string | object}. Unknown URLs get a
/// 404. No socket is ever opened.
class RecordedHttpClient final : public HttpClient {
public:
    explicit RecordedHttpClient(const std::string& directory);
    HttpResponse get(const std::string& url, const HttpHeaders&) override;
    HttpResponse post(const std::string& url, const std::string&, const std::string&,
                      const HttpHeaders&) override;
    std::size_t size() const { return responses_.size(); }

    // Lowercased scheme/host, percent-encoding of spaces normalized.
    static std::string normalize_url(const std::string& url);

private:
    std::map<std::string, HttpResponse> responses_;
};

} // namespace mdcrow
