#pragma once

// Shared helpers for the test binaries. Oracles live in the test files.

#include "mdcrow/agent/action.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/tools/toolset.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

namespace testing {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag = "t") {
        static std::atomic<int> counter{0};
        path_ = fs::temp_directory_path() /
                ("mdcrow_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& s) const { return path_ / s; }

private:
    fs::path path_;
};

inline std::string call_block(const std::string& tool, const std::string& input,
                              const std::string& thought = "next step") {
    return mdcrow::agent::render_action(mdcrow::agent::AgentAction::call(thought, tool, input));
}

inline std::string final_block(const std::string& answer, const std::string& thought = "done") {
    return "Thought: " + thought + "\nFinal Answer: " + answer;
}

inline fs::path data() { return mdcrow::tools::data_dir(); }

inline std::string slurp(const fs::path& p) { return mdcrow::read_file(p.string()); }

inline void spit(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    mdcrow::write_file(p.string(), text);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testing
