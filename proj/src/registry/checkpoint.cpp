#include "mdcrow/registry/checkpoint.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/llm/gateway.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mdcrow::registry {

using nlohmann::json;

bool valid_run_id(std::string_view id) {
    if (id.empty() || id.size() > 64) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    });
}

namespace {

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    write_file(tmp.string(), content);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw PersistenceError("cannot write " + path.string());
    }
}

json entry_json(const FileEntry& e) {
    return json{{"file_id", e.file_id},
                {"path", e.path},
                {"description", e.description},
                {"created_at_step", e.created_at_step},
                {"kind", to_string(e.kind)},
                {"missing", e.missing}};
}

} // namespace

std::string manifest_text(const RunCheckpoint& cp) {
    json files = json::array();
    for (const auto& e : cp.files) files.push_back(entry_json(e));
    json j{{"schema", kManifestSchema},
           {"run_id", cp.run_id},
           {"parent_run", cp.parent_run ? json(*cp.parent_run) : json(nullptr)},
           {"created", cp.created},
           {"user_input", cp.trace.user_input},
           {"summary", cp.summary.text},
           {"summary_source", cp.summary.from_llm ? "llm" : "mechanical"},
           {"summary_prompt", summary_prompt_template()},
           {"outcome", to_string(cp.trace.outcome)},
           {"files", files}};
    return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

RunCheckpoint parse_manifest(std::string_view text) {
    try {
        json j = json::parse(text);
        if (j.at("schema").get<std::string>() != kManifestSchema)
            throw IntegrityError("unsupported manifest schema '" + j.at("schema").get<std::string>() + "'");
        RunCheckpoint cp;
        cp.run_id = j.at("run_id").get<std::string>();
        if (!j.at("parent_run").is_null()) cp.parent_run = j.at("parent_run").get<std::string>();
        cp.created = j.at("created").get<std::string>();
        cp.summary.text = j.at("summary").get<std::string>();
        const auto src = j.at("summary_source").get<std::string>();
        if (src != "llm" && src != "mechanical") throw IntegrityError("bad summary_source '" + src + "'");
        cp.summary.from_llm = src == "llm";
        cp.trace.user_input = j.at("user_input").get<std::string>();
        cp.trace.outcome = agent::parse_outcome(j.at("outcome").get<std::string>());
        for (const auto& f : j.at("files")) {
            FileEntry e;
            e.file_id = f.at("file_id").get<std::string>();
            e.path = f.at("path").get<std::string>();
            e.description = f.at("description").get<std::string>();
            e.created_at_step = f.at("created_at_step").get<int>();
            e.kind = parse_kind(f.at("kind").get<std::string>());
            e.missing = f.value("missing", false);
            cp.files.push_back(std::move(e));
        }
        return cp;
    } catch (const IntegrityError&) {
        throw;
    } catch (const std::exception& e) {
        throw IntegrityError(std::string("corrupt manifest: ") + e.what());
    }
}

std::string save_checkpoint(RunCheckpoint cp, const fs::path& root, IdSource& ids, Clock& clock) {
    std::error_code ec;
    fs::create_directories(root, ec);
    if (ec || !fs::is_directory(root))
        throw PersistenceError("checkpoint root " + root.string() + " is not writable" +
                               (ec ? ": " + ec.message() : std::string()));

    fs::path dir;
    if (cp.run_id.empty()) {
        // directory creation is the atomicity point between concurrent writers
        for (int tries = 0;; ++tries) {
            if (tries > 100) throw PersistenceError("could not allocate a run id under " + root.string());
            auto id = ids.next_run_id();
            dir = root / id;
            if (fs::create_directory(dir, ec)) {
                cp.run_id = id;
                break;
            }
            if (ec) throw PersistenceError("cannot create " + dir.string() + ": " + ec.message());
        }
    } else {
        if (!valid_run_id(cp.run_id)) throw PersistenceError("invalid run id '" + cp.run_id + "'");
        dir = root / cp.run_id;
        fs::create_directories(dir, ec);
        if (ec) throw PersistenceError("cannot create " + dir.string() + ": " + ec.message());
    }
    if (cp.created.empty()) cp.created = clock.iso_timestamp();

    const fs::path files_dir = dir / "files";
    fs::create_directories(files_dir, ec);
    if (ec) throw PersistenceError("cannot create " + files_dir.string() + ": " + ec.message());

    RunCheckpoint stored = cp;
    for (auto& e : stored.files) {
        const std::string name = e.file_id + "__" + fs::path(e.path).filename().string();
        const fs::path dest = files_dir / name;
        const fs::path src = e.path;
        if (!e.missing && fs::exists(src)) {
            std::error_code same_ec;
            if (!fs::exists(dest) || !fs::equivalent(src, dest, same_ec)) {
                if (!fs::exists(dest) || fs::file_size(dest) != fs::file_size(src) ||
                    fs::last_write_time(dest) < fs::last_write_time(src)) {
                    fs::copy_file(src, dest, fs::copy_options::overwrite_existing, ec);
                    if (ec) throw PersistenceError("cannot copy " + src.string() + ": " + ec.message());
                }
            }
        } else if (!fs::exists(dest)) {
            e.missing = true;
        }
        e.path = (fs::path(stored.run_id) / "files" / name).generic_string();
    }

    write_atomic(dir / "trace", to_json(cp.trace).dump(2, ' ', false, json::error_handler_t::replace) + "\n");
    write_atomic(dir / "manifest", manifest_text(stored));
    return cp.run_id;
}

ResumeContext load_checkpoint(const fs::path& root, std::string_view run_id, const fs::path& work_dir) {
    if (!valid_run_id(run_id) || !fs::is_directory(root / std::string(run_id)))
        throw NotFoundError("unknown run id '" + std::string(run_id) + "' under " + root.string());
    const fs::path dir = root / std::string(run_id);
    if (!fs::exists(dir / "manifest")) throw IntegrityError("checkpoint " + std::string(run_id) + " has no manifest");

    RunCheckpoint cp = parse_manifest(read_file((dir / "manifest").string()));
    if (cp.run_id != run_id)
        throw IntegrityError("manifest run id '" + cp.run_id + "' does not match folder '" + std::string(run_id) + "'");
    if (!fs::exists(dir / "trace")) throw IntegrityError("checkpoint " + std::string(run_id) + " has no trace");
    agent::AgentTrace trace;
    try {
        trace = agent::trace_from_json(json::parse(read_file((dir / "trace").string())));
    } catch (const std::exception& e) {
        throw IntegrityError(std::string("corrupt trace: ") + e.what());
    }
    if (trace.outcome != cp.trace.outcome) throw IntegrityError("trace outcome disagrees with the manifest");
    cp.trace = std::move(trace);

    ResumeContext ctx{cp, FileRegistry(work_dir), {}};
    for (auto& e : ctx.checkpoint.files) {
        const fs::path rel(e.path);
        if (rel.is_absolute() || rel.lexically_normal().string().rfind("..", 0) == 0)
            throw IntegrityError("manifest path escapes the checkpoint root: " + e.path);
        e.path = fs::absolute(root / rel).lexically_normal().string();
        e.missing = !fs::is_regular_file(e.path);
        if (e.missing) ctx.missing.push_back(e.file_id);
        ctx.registry.adopt(e);
    }
    return ctx;
}

std::vector<std::string> list_checkpoints(const fs::path& root) {
    std::vector<std::string> ids;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) return ids;
    for (const auto& d : fs::directory_iterator(root, ec))
        if (d.is_directory() && fs::exists(d.path() / "manifest")) ids.push_back(d.path().filename().string());
    std::sort(ids.begin(), ids.end());
    return ids;
}

// ---- summaries --------------------------------------------------------------

const std::string& summary_prompt_template() {
    static const std::string t =
        "Summarize the following molecular dynamics agent run so that a later session can continue it.\n"
        "Cover: (1) the user's goal, (2) the tools used and what they produced, (3) every file produced, "
        "referenced by its file_id, (4) outstanding issues or unfinished steps.\n"
        "Use at most 500 words.\n\n"
        "User prompt:\n{input}\n\nAgent trace:\n{trace}\n\nFiles:\n{files}\n";
    return t;
}

std::string limit_words(std::string_view text, std::size_t max_words) {
    std::size_t words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const bool space = std::isspace(static_cast<unsigned char>(text[i]));
        if (!space && !in_word) {
            if (++words > max_words) return trim(text.substr(0, i));
        }
        in_word = !space;
    }
    return std::string(text);
}

namespace {

std::string render_trace(const agent::AgentTrace& t) {
    std::string out;
    for (const auto& s : t.steps) {
        out += "Step " + std::to_string(s.index) + ": ";
        if (s.action.kind == agent::AgentAction::Kind::tool_call) {
            out += s.action.tool_name + "(" + s.action.tool_input + ") -> " + limit_words(s.observation, 60);
        } else {
            out += "Final Answer: " + limit_words(s.action.answer, 120);
        }
        out += "\n";
    }
    out += "Outcome: " + to_string(t.outcome) + "\n";
    return out;
}

std::string render_files(const std::vector<FileEntry>& files) {
    std::string out;
    for (const auto& e : files) out += e.file_id + " (" + to_string(e.kind) + "): " + e.description + "\n";
    return out.empty() ? "none\n" : out;
}

} // namespace

RunSummary mechanical_digest(const agent::AgentTrace& trace, const std::vector<FileEntry>& files) {
    std::vector<std::string> tools;
    for (const auto& s : trace.steps)
        if (s.action.kind == agent::AgentAction::Kind::tool_call &&
            std::find(tools.begin(), tools.end(), s.action.tool_name) == tools.end())
            tools.push_back(s.action.tool_name);

    auto build = [&](bool with_descriptions) {
        std::string d = "[mechanical summary; no language model was available]\n";
        d += "Goal: " + limit_words(trace.user_input, 60) + "\n";
        d += "Tools used: " + (tools.empty() ? std::string("none") : join(tools, ", ")) + "\n";
        d += "Files:";
        if (files.empty()) d += " none";
        for (const auto& e : files) {
            d += " " + e.file_id + " (" + to_string(e.kind) + ")";
            if (with_descriptions) d += ": " + limit_words(e.description, 12) + ";";
        }
        d += "\nOutcome: " + to_string(trace.outcome);
        if (!trace.final_text.empty()) d += ". Final answer: " + limit_words(trace.final_text, 80);
        if (!trace.error.empty()) d += ". Error: " + limit_words(trace.error, 40);
        return d + "\n";
    };
    std::string d = build(true);
    std::istringstream ws(d);
    std::size_t n = 0;
    for (std::string w; ws >> w;) ++n;
    if (n > kSummaryWordLimit) d = build(false);
    return {d, false};
}

RunSummary summarize_run(const agent::AgentTrace& trace, const std::vector<FileEntry>& files,
                         llm::ChatModel* model) {
    if (trace.steps.empty() && trace.user_input.empty()) throw UsageError("cannot summarize an empty trace");
    if (!model) return mechanical_digest(trace, files);
    std::string prompt = summary_prompt_template();
    prompt = replace_all(prompt, "{input}", trace.user_input);
    prompt = replace_all(prompt, "{trace}", render_trace(trace));
    prompt = replace_all(prompt, "{files}", render_files(files));
    try {
        auto text = model->complete({{llm::Role::system, "You write concise, factual summaries of agent runs."},
                                     {llm::Role::user, prompt}});
        text = trim(text);
        if (text.empty()) return mechanical_digest(trace, files);
        return {limit_words(text, kSummaryWordLimit), true};
    } catch (const std::exception&) {
        return mechanical_digest(trace, files);
    }
}

} // namespace mdcrow::registry
