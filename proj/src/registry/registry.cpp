#include "mdcrow/registry/registry.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <cstdio>

namespace mdcrow::registry {

std::string to_string(FileKind k) {
    switch (k) {
        case FileKind::structure: return "structure";
        case FileKind::trajectory: return "trajectory";
        case FileKind::state_log: return "state_log";
        case FileKind::figure: return "figure";
        case FileKind::script: return "script";
        case FileKind::other: return "other";
    }
    return "other";
}

FileKind parse_kind(std::string_view s) {
    if (s == "structure") return FileKind::structure;
    if (s == "trajectory") return FileKind::trajectory;
    if (s == "state_log") return FileKind::state_log;
    if (s == "figure") return FileKind::figure;
    if (s == "script") return FileKind::script;
    if (s == "other") return FileKind::other;
    throw ParseError("unknown file kind '" + std::string(s) + "'");
}

std::string_view id_prefix(FileKind k) {
    switch (k) {
        case FileKind::structure: return "str";
        case FileKind::trajectory: return "trj";
        case FileKind::state_log: return "log";
        case FileKind::figure: return "fig";
        case FileKind::script: return "scr";
        case FileKind::other: return "oth";
    }
    return "oth";
}

FileRegistry::FileRegistry(fs::path work_dir) : work_dir_(std::move(work_dir)) {
    std::error_code ec;
    fs::create_directories(work_dir_, ec);
    if (ec) throw PersistenceError("cannot create work directory " + work_dir_.string() + ": " + ec.message());
    work_dir_ = fs::absolute(work_dir_);
}

FileRegistry::FileRegistry(const FileRegistry& other) { *this = other; }

FileRegistry& FileRegistry::operator=(const FileRegistry& other) {
    if (this == &other) return *this;
    std::scoped_lock lock(mu_, other.mu_);
    work_dir_ = other.work_dir_;
    entries_ = other.entries_;
    counter_ = other.counter_;
    step_ = other.step_;
    path_counter_ = other.path_counter_;
    return *this;
}

void FileRegistry::set_step(int step) {
    std::lock_guard lock(mu_);
    step_ = step;
}

int FileRegistry::step() const {
    std::lock_guard lock(mu_);
    return step_;
}

FileEntry FileRegistry::register_file(const fs::path& path, std::string description, FileKind kind) {
    return register_file(path, std::move(description), kind, step());
}

FileEntry FileRegistry::register_file(const fs::path& path, std::string description, FileKind kind, int step) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec))
        throw PersistenceError("cannot register " + path.string() + ": no such file");
    std::lock_guard lock(mu_);
    ++counter_;
    char id[32];
    std::snprintf(id, sizeof id, "%s_%04d", std::string(id_prefix(kind)).c_str(), counter_);
    FileEntry e{id, fs::absolute(path).lexically_normal().string(), std::move(description), step, kind, false};
    entries_.push_back(e);
    return e;
}

void FileRegistry::adopt(FileEntry entry) {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_)
        if (e.file_id == entry.file_id) throw IntegrityError("duplicate file id " + entry.file_id);
    auto us = entry.file_id.find('_');
    if (us != std::string::npos) {
        try {
            counter_ = std::max(counter_, static_cast<int>(parse_int(entry.file_id.substr(us + 1), "file id")));
        } catch (const ParseError&) {
        }
    }
    entries_.push_back(std::move(entry));
}

bool FileRegistry::contains(std::string_view file_id) const {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_)
        if (e.file_id == file_id) return true;
    return false;
}

FileEntry FileRegistry::get(std::string_view file_id) const {
    std::lock_guard lock(mu_);
    for (const auto& e : entries_)
        if (e.file_id == file_id) return e;
    std::vector<std::string> ids;
    for (const auto& e : entries_) ids.push_back(e.file_id);
    throw NotFoundError("unknown file id '" + std::string(file_id) + "'. Known ids: " +
                        (ids.empty() ? std::string("none") : join(ids, ", ")));
}

fs::path FileRegistry::resolve(std::string_view file_id) const {
    auto e = get(file_id);
    if (e.missing || !fs::exists(e.path))
        throw NotFoundError("file " + e.file_id + " (" + e.description + ") is registered but its payload is missing");
    return e.path;
}

std::vector<FileEntry> FileRegistry::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::size_t FileRegistry::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

namespace {

std::string line_for(const FileEntry& e) {
    return e.file_id + " (" + to_string(e.kind) + ", step " + std::to_string(e.created_at_step) +
           (e.missing ? ", MISSING" : "") + "): " + e.description;
}

} // namespace

std::string FileRegistry::describe_all() const {
    std::string out;
    for (const auto& e : entries()) out += line_for(e) + "\n";
    return out;
}

std::string FileRegistry::compact_listing(std::size_t max_entries) const {
    auto all = entries();
    if (all.empty()) return "(no files registered yet)";
    std::string out;
    std::size_t start = all.size() > max_entries ? all.size() - max_entries : 0;
    if (start > 0) out += "(" + std::to_string(start) + " older files not shown)\n";
    for (std::size_t i = start; i < all.size(); ++i) out += line_for(all[i]) + "\n";
    return out;
}

fs::path FileRegistry::new_path(std::string_view stem, std::string_view ext) const {
    std::lock_guard lock(mu_);
    while (true) {
        ++path_counter_;
        fs::path p = work_dir_ / (std::string(stem) + "_" + std::to_string(path_counter_) + std::string(ext));
        if (!fs::exists(p)) return p;
    }
}

} // namespace mdcrow::registry
