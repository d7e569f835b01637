#include "mdcrow/info/literature.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <regex>
#include <set>

namespace mdcrow::info {

namespace {

std::string inflate(std::string_view in) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw ParseError("zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    std::string out;
    char buf[16384];
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = ::inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw ParseError("corrupt compressed stream");
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
    } while (rc != Z_STREAM_END && zs.avail_in > 0);
    inflateEnd(&zs);
    return out;
}

// Literal string starting at s[i] == '('; advances i past the closing paren.
std::string pdf_literal(std::string_view s, std::size_t& i) {
    std::string out;
    int depth = 0;
    for (++i; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\\' && i + 1 < s.size()) {
            char e = s[++i];
            switch (e) {
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 't': out += '\t'; break;
            case 'b': case 'f': break;
            case '\n': break;
            default:
                if (e >= '0' && e <= '7') {
                    int v = e - '0';
                    for (int k = 0; k < 2 && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '7'; ++k)
                        v = v * 8 + (s[++i] - '0');
                    out += static_cast<char>(v);
                } else {
                    out += e;
                }
            }
        } else if (c == '(') {
            ++depth;
            out += c;
        } else if (c == ')') {
            if (depth == 0) {
                ++i;
                return out;
            }
            --depth;
            out += c;
        } else {
            out += c;
        }
    }
    return out;
}

// Text-showing operators of one content stream.
std::string content_text(std::string_view s) {
    std::string out;
    std::string pending;
    for (std::size_t i = 0; i < s.size();) {
        char c = s[i];
        if (c == '(') {
            pending += pdf_literal(s, i);
            continue;
        }
        if (c == '[' || c == ']') {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '"' || c == '*') {
            std::size_t j = i;
            while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != '[' &&
                   s[j] != '/')
                ++j;
            const auto op = s.substr(i, j - i);
            if (op == "Tj" || op == "TJ") {
                out += pending;
                pending.clear();
            } else if (op == "'" || op == "\"") {
                out += "\n" + pending;
                pending.clear();
            } else if (op == "Td" || op == "TD" || op == "T*" || op == "Tm" || op == "ET") {
                if (!out.empty() && out.back() != '\n' && out.back() != ' ') out += ' ';
            }
            pending.clear();
            i = j == i ? i + 1 : j;
            continue;
        }
        ++i;
    }
    return out;
}

} // namespace

std::string extract_pdf_text(std::string_view pdf) {
    if (pdf.substr(0, 5) != "%PDF-") throw ParseError("not a PDF file");
    std::string text;
    std::size_t pos = 0;
    int streams = 0;
    while ((pos = pdf.find("stream", pos)) != std::string_view::npos) {
        if (pos >= 3 && pdf.substr(pos - 3, 3) == "end") {
            pos += 6;
            continue;
        }
        // Dictionary preceding the stream keyword.
        const auto dict_start = pdf.rfind("<<", pos);
        const auto dict = dict_start == std::string_view::npos ? std::string_view{} : pdf.substr(dict_start, pos - dict_start);
        std::size_t data = pos + 6;
        if (data < pdf.size() && pdf[data] == '\r') ++data;
        if (data < pdf.size() && pdf[data] == '\n') ++data;
        const auto end = pdf.find("endstream", data);
        if (end == std::string_view::npos) break;
        auto body = pdf.substr(data, end - data);
        pos = end + 9;
        std::string decoded;
        if (dict.find("/FlateDecode") != std::string_view::npos) {
            try {
                decoded = inflate(body);
            } catch (const ParseError&) {
                continue;
            }
        } else if (dict.find("/Filter") == std::string_view::npos) {
            decoded = std::string(body);
        } else {
            continue;  // other filters (images, fonts) carry no text for us
        }
        if (dict.find("/Subtype") != std::string_view::npos) continue;
        const auto t = content_text(decoded);
        if (!trim(t).empty()) {
            if (!text.empty()) text += "\n";
            text += t;
            ++streams;
        }
    }
    if (streams == 0) throw ParseError("no extractable text in PDF");
    return text;
}

std::vector<std::string> chunk_text(std::string_view text, std::size_t size) {
    if (size == 0) throw UsageError("chunk size must be positive");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size(); i += size) out.emplace_back(text.substr(i, size));
    return out;
}

Corpus load_corpus(const fs::path& dir, std::size_t chunk_size) {
    Corpus c;
    if (!fs::is_directory(dir)) throw NotFoundError("corpus directory not found: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const auto ext = to_lower(f.extension().string());
        if (ext != ".txt" && ext != ".md" && ext != ".pdf") continue;
        Document d{f.stem().string(), f.string(), {}};
        try {
            const auto raw = read_file(f.string());
            d.text = ext == ".pdf" ? extract_pdf_text(raw) : raw;
        } catch (const Error& e) {
            c.warnings.push_back("skipped " + f.filename().string() + ": " + e.what());
            continue;
        }
        if (trim(d.text).empty()) {
            c.warnings.push_back("skipped " + f.filename().string() + ": empty");
            continue;
        }
        const auto pieces = chunk_text(d.text, chunk_size);
        for (std::size_t k = 0; k < pieces.size(); ++k) c.chunks.push_back({d.doc_id, k, pieces[k], d.source_path});
        c.documents.push_back(std::move(d));
    }
    return c;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

int lookup(const std::vector<std::pair<std::string, int>>& v, const std::string& t) {
    auto it = std::lower_bound(v.begin(), v.end(), t, [](const auto& p, const std::string& k) { return p.first < k; });
    return it != v.end() && it->first == t ? it->second : 0;
}

} // namespace

Bm25Index::Bm25Index(const std::vector<CorpusChunk>& chunks, double k1, double b) : k1_(k1), b_(b) {
    std::map<std::string, int> df;
    double total = 0;
    for (const auto& c : chunks) {
        std::map<std::string, int> tf;
        const auto toks = tokenize(c.text);
        for (const auto& t : toks) tf[t]++;
        for (const auto& [t, n] : tf) df[t]++;
        tf_.emplace_back(tf.begin(), tf.end());
        len_.push_back(toks.size());
        total += static_cast<double>(toks.size());
    }
    df_.assign(df.begin(), df.end());
    avg_len_ = chunks.empty() ? 0.0 : total / static_cast<double>(chunks.size());
}

double Bm25Index::idf(const std::string& term) const {
    const double n = static_cast<double>(tf_.size());
    const double d = lookup(df_, term);
    return std::log((n - d + 0.5) / (d + 0.5) + 1.0);
}

double Bm25Index::score(const std::vector<std::string>& q, std::size_t chunk) const {
    double s = 0.0;
    const double norm = avg_len_ > 0 ? static_cast<double>(len_[chunk]) / avg_len_ : 1.0;
    for (const auto& t : q) {
        const double f = lookup(tf_[chunk], t);
        if (f == 0) continue;
        s += idf(t) * f * (k1_ + 1) / (f + k1_ * (1 - b_ + b_ * norm));
    }
    return s;
}

std::vector<std::size_t> Bm25Index::top(std::string_view query, std::size_t k) const {
    auto q = tokenize(query);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < tf_.size(); ++i) {
        const double s = score(q, i);
        if (s > 0) scored.emplace_back(s, i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].second);
    return out;
}

std::string citation_label(const Citation& c) { return "[" + c.doc_id + "#" + std::to_string(c.chunk_index) + "]"; }

namespace {

std::string excerpt(const std::string& text, std::size_t n) {
    std::string t = replace_all(replace_all(text, "\n", " "), "\r", " ");
    if (t.size() <= n) return trim(t);
    return trim(t.substr(0, n)) + "...";
}

} // namespace

LiteratureAnswer literature_search(std::string_view question, const Corpus& corpus, llm::ChatModel* model,
                                   std::size_t top_k) {
    if (trim(question).empty()) throw UsageError("literature search needs a question");
    LiteratureAnswer out;
    out.warnings = corpus.warnings;
    if (corpus.chunks.empty()) {
        out.no_sources = true;
        out.answer = "no sources: the literature corpus contains no readable documents";
        return out;
    }
    const Bm25Index index(corpus.chunks);
    out.retrieved = index.top(question, top_k);
    if (out.retrieved.empty()) {
        out.no_sources = true;
        out.answer = "no sources: no document in the corpus matches the question";
        return out;
    }
    std::set<std::pair<std::string, std::size_t>> valid;
    for (auto i : out.retrieved) valid.emplace(corpus.chunks[i].doc_id, corpus.chunks[i].chunk_index);

    if (model == nullptr) {
        std::string a = "Most relevant passages:\n";
        for (std::size_t r = 0; r < out.retrieved.size() && r < 3; ++r) {
            const auto& c = corpus.chunks[out.retrieved[r]];
            Citation cit{c.doc_id, c.chunk_index};
            a += "- " + excerpt(c.text, 300) + " " + citation_label(cit) + "\n";
            out.citations.push_back(cit);
        }
        out.answer = a;
        return out;
    }

    std::string prompt =
        "Answer the question using only the numbered sources below. After every claim, cite the source label "
        "in square brackets exactly as given, for example [doc#0]. If the sources do not contain the answer, "
        "say so.\n\nQuestion: " +
        std::string(question) + "\n\nSources:\n";
    for (auto i : out.retrieved) {
        const auto& c = corpus.chunks[i];
        prompt += citation_label({c.doc_id, c.chunk_index}) + "\n" + c.text + "\n\n";
    }
    const std::vector<llm::ChatMessage> msgs{
        {llm::Role::system, "You are a careful scientific assistant that answers from provided sources."},
        {llm::Role::user, prompt}};
    out.answer = model->complete(msgs);

    static const std::regex label(R"(\[([^\[\]#\s]+)#([0-9]+)\])");
    std::set<std::pair<std::string, std::size_t>> seen;
    for (auto it = std::sregex_iterator(out.answer.begin(), out.answer.end(), label); it != std::sregex_iterator();
         ++it) {
        std::pair<std::string, std::size_t> key{(*it)[1].str(), std::stoul((*it)[2].str())};
        if (!valid.count(key)) {
            out.warnings.push_back("dropped citation to unknown source " + (*it)[0].str());
            continue;
        }
        if (seen.insert(key).second) out.citations.push_back({key.first, key.second});
    }
    if (out.citations.empty()) {
        const auto& c = corpus.chunks[out.retrieved.front()];
        out.citations.push_back({c.doc_id, c.chunk_index});
        out.warnings.push_back("answer carried no citations; citing the top-ranked source");
    }
    return out;
}

std::string format_literature_answer(const LiteratureAnswer& a, const Corpus& corpus) {
    std::string t = trim(a.answer) + "\n";
    if (!a.citations.empty()) {
        t += "\nSources:\n";
        for (const auto& c : a.citations) {
            std::string path;
            for (const auto& d : corpus.documents)
                if (d.doc_id == c.doc_id) path = fs::path(d.source_path).filename().string();
            t += "  " + citation_label(c) + " " + path + "\n";
        }
    }
    for (const auto& w : a.warnings) t += "warning: " + w + "\n";
    return t;
}

} // namespace mdcrow::info
