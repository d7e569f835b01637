#include "mdcrow/eval/sandbox.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <chrono>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sched.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>

namespace mdcrow::eval {

namespace fs = std::filesystem;

namespace {

void child(const std::string& script, const SandboxConfig& cfg, int out_fd, int err_fd, int flag_fd) {
    dup2(out_fd, STDOUT_FILENO);
    dup2(err_fd, STDERR_FILENO);
    setpgid(0, 0);
    char isolated = 0;
    if (!cfg.allow_network) {
        if (unshare(CLONE_NEWUSER | CLONE_NEWNET) == 0 || unshare(CLONE_NEWNET) == 0) isolated = 1;
    }
    (void)!write(flag_fd, &isolated, 1);
    close(flag_fd);
    rlimit mem{static_cast<rlim_t>(cfg.memory_limit_bytes), static_cast<rlim_t>(cfg.memory_limit_bytes)};
    setrlimit(RLIMIT_AS, &mem);
    const auto cpu = static_cast<rlim_t>(std::ceil(cfg.time_limit_s)) + 1;
    rlimit cpu_lim{cpu, cpu + 1};
    setrlimit(RLIMIT_CPU, &cpu_lim);
    rlimit core{0, 0};
    setrlimit(RLIMIT_CORE, &core);
    if (chdir(cfg.work_dir.c_str()) != 0) _exit(126);
    const std::string home = "HOME=" + cfg.work_dir.string();
    std::vector<std::string> env{"PATH=/usr/local/bin:/usr/bin:/bin", home, "PYTHONDONTWRITEBYTECODE=1",
                                 "MPLBACKEND=Agg", "LANG=C.UTF-8"};
    if (!cfg.allow_network) {
        // Belt and braces when no namespace could be obtained.
        env.push_back("http_proxy=http://127.0.0.1:9");
        env.push_back("https_proxy=http://127.0.0.1:9");
        env.push_back("HTTP_PROXY=http://127.0.0.1:9");
        env.push_back("HTTPS_PROXY=http://127.0.0.1:9");
    }
    std::vector<char*> envp;
    for (auto& e : env) envp.push_back(e.data());
    envp.push_back(nullptr);
    std::string interp = cfg.interpreter;
    std::string arg = script;
    char* argv[] = {interp.data(), arg.data(), nullptr};
    execvpe(interp.c_str(), argv, envp.data());
    _exit(127);
}

} // namespace

SandboxResult run_snippet(const std::string& code, const SandboxConfig& cfg) {
    if (cfg.work_dir.empty()) throw UsageError("sandbox needs a work directory");
    fs::create_directories(cfg.work_dir);
    const auto script = fs::absolute(cfg.work_dir / "snippet.py");
    write_file(script.string(), code);

    int out_pipe[2], err_pipe[2], flag_pipe[2];
    if (pipe(out_pipe) || pipe(err_pipe) || pipe(flag_pipe)) throw Error("sandbox: pipe failed");
    const pid_t pid = fork();
    if (pid < 0) throw Error("sandbox: fork failed");
    if (pid == 0) {
        close(out_pipe[0]);
        close(err_pipe[0]);
        close(flag_pipe[0]);
        child(script.string(), cfg, out_pipe[1], err_pipe[1], flag_pipe[1]);
    }
    close(out_pipe[1]);
    close(err_pipe[1]);
    close(flag_pipe[1]);

    SandboxResult r;
    char flag = 0;
    if (read(flag_pipe[0], &flag, 1) == 1) r.network_isolated = flag != 0;
    close(flag_pipe[0]);

    const auto start = std::chrono::steady_clock::now();
    pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    int open_fds = 2;
    char buf[4096];
    while (open_fds > 0) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > cfg.time_limit_s) {
            r.timed_out = true;
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            break;
        }
        const int wait_ms = static_cast<int>(std::max(1.0, (cfg.time_limit_s - elapsed) * 1000.0));
        const int n = poll(fds, 2, std::min(wait_ms, 200));
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int i = 0; i < 2; ++i) {
            if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            const ssize_t k = read(fds[i].fd, buf, sizeof(buf));
            if (k <= 0) {
                close(fds[i].fd);
                fds[i].fd = -1;
                --open_fds;
                continue;
            }
            auto& dst = i == 0 ? r.stdout_text : r.stderr_text;
            if (dst.size() < cfg.output_limit) dst.append(buf, static_cast<std::size_t>(k));
        }
    }
    for (auto& f : fds)
        if (f.fd >= 0) close(f.fd);
    int status = 0;
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) {
        r.exit_code = 128 + WTERMSIG(status);
        if (WTERMSIG(status) == SIGXCPU) r.timed_out = true;
    }
    if (r.stderr_text.find("MemoryError") != std::string::npos) r.memory_exceeded = true;
    return r;
}

std::string sandbox_observation(const SandboxResult& r, const SandboxConfig& cfg) {
    if (r.timed_out)
        return "Error: resource limit: execution exceeded the time limit of " + format_number(cfg.time_limit_s) +
               " s and was stopped";
    if (r.memory_exceeded)
        return "Error: resource limit: execution exceeded the memory limit of " +
               std::to_string(cfg.memory_limit_bytes >> 20) + " MB";
    std::string out = r.stdout_text;
    if (!r.stderr_text.empty()) out += (out.empty() ? "" : "\n") + r.stderr_text;
    out = trim(out);
    if (r.exit_code != 0 && out.empty()) out = "process exited with status " + std::to_string(r.exit_code);
    return out.empty() ? std::string("(no output)") : out;
}

} // namespace mdcrow::eval
