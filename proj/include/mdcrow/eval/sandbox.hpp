#pragma once

#include <filesystem>
#include <string>

namespace mdcrow::eval {

struct SandboxConfig {
    std::string interpreter = "python3";
    double time_limit_s = 120.0;
    long long memory_limit_bytes = 2LL << 30;  // 2 GB address space
    std::filesystem::path work_dir;            // created if missing; snippets run here
    bool allow_network = false;
    std::size_t output_limit = 64 * 1024;
};

struct SandboxResult {
    std::string stdout_text;
    std::string stderr_text;
    int exit_code = 0;
    bool timed_out = false;
    bool memory_exceeded = false;
    bool network_isolated = false;  // a private network namespace was obtained
};

// Runs one code snippet in a child process with CPU, wall-clock and memory
// limits, in the work directory, with a scrubbed environment.
SandboxResult run_snippet(const std::string& code, const SandboxConfig& config);

// Observation text for the agent: combined output, or "Error: resource
// limit ..." when a limit was hit.
std::string sandbox_observation(const SandboxResult& r, const SandboxConfig& config);

} // namespace mdcrow::eval
