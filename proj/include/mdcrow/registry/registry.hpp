#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::registry {

namespace fs = std::filesystem;

enum class FileKind { structure, trajectory, state_log, figure, script, other };

std::string to_string(FileKind k);
FileKind parse_kind(std::string_view s);
std::string_view id_prefix(FileKind k);

struct FileEntry {
    std::string file_id;
    std::string path;  // absolute while a run is live; relative to the checkpoint root in a manifest
    std::string description;
    int created_at_step = 0;
    FileKind kind = FileKind::other;
    bool missing = false;  // set by load_checkpoint when the payload is gone
    friend bool operator==(const FileEntry&, const FileEntry&) = default;
};

/// Path registry of one run. Ids look like "trj_0003": a kind prefix and a
/// run-wide counter.
class FileRegistry {
public:
    explicit FileRegistry(fs::path work_dir);
    FileRegistry(const FileRegistry& other);
    FileRegistry& operator=(const FileRegistry& other);

    const fs::path& work_dir() const { return work_dir_; }

    // Step stamped on files registered from now on.
    void set_step(int step);
    int step() const;

    FileEntry register_file(const fs::path& path, std::string description, FileKind kind);
    FileEntry register_file(const fs::path& path, std::string description, FileKind kind, int step);

    // Entry restored from a checkpoint; keeps its id.
    void adopt(FileEntry entry);

    // Throws NotFoundError naming the known ids.
    FileEntry get(std::string_view file_id) const;
    bool contains(std::string_view file_id) const;

    // On-disk path of a live entry; missing payloads are an error.
    fs::path resolve(std::string_view file_id) const;

    std::vector<FileEntry> entries() const;
    std::size_t size() const;

    // "file_id (kind, step N): description" per line.
    std::string describe_all() const;
    // Newest `max_entries` lines, for prompt injection.
    std::string compact_listing(std::size_t max_entries = 30) const;

    // Fresh path inside the work directory: <stem>_<n><ext>.
    fs::path new_path(std::string_view stem, std::string_view ext) const;

private:
    fs::path work_dir_;
    mutable std::mutex mu_;
    std::vector<FileEntry> entries_;
    int counter_ = 0;
    int step_ = 0;
    mutable int path_counter_ = 0;
};

} // namespace mdcrow::registry
