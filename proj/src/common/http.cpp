#include "mdcrow/common/http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <algorithm>
#include <regex>

namespace mdcrow {

namespace {

struct SplitUrl {
    std::string origin;
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) return {url, "/"};
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

class HttplibClient final : public HttpClient {
public:
    explicit HttplibClient(double timeout) : timeout_(timeout) {}

    HttpResponse get(const std::string& url, const HttpHeaders& headers) override {
        auto parts = split_url(url);
        httplib::Client cli(parts.origin);
        configure(cli);
        httplib::Headers h(headers.begin(), headers.end());
        return convert(cli.Get(parts.path, h));
    }

    HttpResponse post(const std::string& url, const std::string& body,
                      const std::string& content_type, const HttpHeaders& headers) override {
        auto parts = split_url(url);
        httplib::Client cli(parts.origin);
        configure(cli);
        httplib::Headers h(headers.begin(), headers.end());
        return convert(cli.Post(parts.path, h, body, content_type));
    }

private:
    void configure(httplib::Client& cli) const {
        const auto secs = static_cast<time_t>(timeout_);
        cli.set_connection_timeout(secs, 0);
        cli.set_read_timeout(secs, 0);
        cli.set_follow_location(true);
    }

    static HttpResponse convert(const httplib::Result& res) {
        HttpResponse out;
        if (!res) {
            out.error = httplib::to_string(res.error());
            return out;
        }
        out.status = res->status;
        out.body = res->body;
        return out;
    }

    double timeout_;
};

} // namespace

std::shared_ptr<HttpClient> make_http_client(double timeout_seconds) {
    return std::make_shared<HttplibClient>(timeout_seconds);
}

HttpResponse NoNetworkClient::get(const std::string& url, const HttpHeaders&) {
    ++attempts_;
    return {0, "", "network access disabled in fixture mode: " + url};
}

HttpResponse NoNetworkClient::post(const std::string& url, const std::string&, const std::string&,
                                   const HttpHeaders&) {
    ++attempts_;
    return {0, "", "network access disabled in fixture mode: " + url};
}

std::string RecordedHttpClient::normalize_url(const std::string& url) {
    auto parts = split_url(url);
    return to_lower(parts.origin) + replace_all(parts.path, " ", "%20");
}

RecordedHttpClient::RecordedHttpClient(const std::string& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw NotFoundError("recording directory not found: " + directory);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(directory))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(f.string()));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("bad recording " + f.string() + ": " + e.what());
        }
        HttpResponse r;
        r.status = doc.value("status", 200);
        const auto& body = doc.at("body");
        r.body = body.is_string() ? body.get<std::string>() : body.dump();
        responses_[normalize_url(doc.at("url").get<std::string>())] = r;
    }
}

HttpResponse RecordedHttpClient::get(const std::string& url, const HttpHeaders&) {
    auto it = responses_.find(normalize_url(url));
    if (it == responses_.end()) return {404, "", ""};
    return it->second;
}

HttpResponse RecordedHttpClient::post(const std::string& url, const std::string&, const std::string&,
                                      const HttpHeaders&) {
    return {405, "", "recordings replay GET only: " + url};
}

} // namespace mdcrow
