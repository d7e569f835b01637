#pragma once

#include "mdcrow/agent/trace.hpp"
#include "mdcrow/common/clock.hpp"
#include "mdcrow/registry/registry.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mdcrow::llm {
class ChatModel;
}

namespace mdcrow::registry {

inline constexpr const char* kManifestSchema = "mdcrow.checkpoint/1";
inline constexpr std::size_t kSummaryWordLimit = 500;

struct RunSummary {
    std::string text;
    bool from_llm = false;
    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

/// Persisted state of one run. In memory, file paths are absolute; in the
/// manifest they are relative to the checkpoint root.
struct RunCheckpoint {
    std::string run_id;
    std::optional<std::string> parent_run;
    std::string created;
    RunSummary summary;
    std::vector<FileEntry> files;
    agent::AgentTrace trace;
};

// Layout: <root>/<run_id>/manifest, <root>/<run_id>/trace and
// <root>/<run_id>/files/<file_id>__<basename>. Allocates a fresh run_id when
// cp.run_id is empty; otherwise rewrites that run's folder.
std::string save_checkpoint(RunCheckpoint cp, const fs::path& root, IdSource& ids, Clock& clock);

struct ResumeContext {
    RunCheckpoint checkpoint;  // paths resolved to absolute
    FileRegistry registry;     // prior entries, missing payloads flagged
    std::vector<std::string> missing;
};

ResumeContext load_checkpoint(const fs::path& root, std::string_view run_id, const fs::path& work_dir);

// Run ids present under a root (folders holding a manifest), sorted.
std::vector<std::string> list_checkpoints(const fs::path& root);

bool valid_run_id(std::string_view id);

std::string manifest_text(const RunCheckpoint& cp);
RunCheckpoint parse_manifest(std::string_view text);  // IntegrityError on any problem

// Fixed template; {input}, {trace} and {files} are substituted.
const std::string& summary_prompt_template();

RunSummary summarize_run(const agent::AgentTrace& trace, const std::vector<FileEntry>& files,
                         llm::ChatModel* model);
RunSummary mechanical_digest(const agent::AgentTrace& trace, const std::vector<FileEntry>& files);

std::string limit_words(std::string_view text, std::size_t max_words);

} // namespace mdcrow::registry
