#include "mcid/solver_bridge.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace mcid {
namespace {

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
        text.replace(pos, key.size(), value);
    return text;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path unique_stem(const std::filesystem::path& dir) {
    static std::atomic<unsigned> counter{0};
    return dir / ("mcid-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
}

}  // namespace

ProcessResult run_solver(const SolverCommand& cmd, const std::string& input_text, const std::string& input_suffix) {
    if (cmd.command.empty()) throw ConfigError("no solver command configured");
    const auto dir = cmd.work_dir.empty() ? std::filesystem::temp_directory_path() : cmd.work_dir;
    const auto stem = unique_stem(dir);
    const auto input = std::filesystem::path(stem.string() + input_suffix);
    const auto output = std::filesystem::path(stem.string() + ".out");
    {
        std::ofstream f(input, std::ios::binary);
        f << input_text;
        if (!f) throw IoError("cannot write solver input " + input.string());
    }

    const bool to_file = cmd.command.find("{output}") != std::string::npos;
    std::string line = replace_all(cmd.command, "{input}", shell_quote(input.string()));
    line = replace_all(line, "{output}", shell_quote(output.string()));

    const pid_t pid = ::fork();
    if (pid < 0) throw IoError("fork failed");
    if (pid == 0) {
        ::setpgid(0, 0);
        if (!to_file) {
            const int fd = ::open(output.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
            if (fd < 0) ::_exit(127);
            ::dup2(fd, STDOUT_FILENO);
            ::close(fd);
        }
        ::execl("/bin/sh", "sh", "-c", line.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }

    ProcessResult result;
    const auto deadline = std::chrono::steady_clock::now() + cmd.timeout;
    int status = 0;
    while (true) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) throw IoError("waitpid failed");
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (!result.timed_out) result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    result.output = read_file(output);
    if (!cmd.keep_files) {
        std::error_code ec;
        std::filesystem::remove(input, ec);
        std::filesystem::remove(output, ec);
    }
    return result;
}

MaxSatOutput run_maxsat_solver(const SolverCommand& cmd, const WcnfInstance& instance) {
    std::ostringstream text;
    write_wcnf(text, instance);
    const ProcessResult p = run_solver(cmd, text.str(), ".wcnf");
    if (p.timed_out) throw TimeoutError("MaxSAT solver exceeded its time limit");
    MaxSatOutput out = parse_maxsat_output(p.output, instance.hard.num_vars);
    if (out.status == SolverStatus::kUnknown && out.model.empty())
        throw ConfigError("MaxSAT solver produced no result (exit code " + std::to_string(p.exit_code) + ")");
    return out;
}

LpSolution run_ilp_solver(const SolverCommand& cmd, const IlpInstance& ilp) {
    std::ostringstream text;
    write_lp(text, ilp);
    const ProcessResult p = run_solver(cmd, text.str(), ".lp");
    if (p.timed_out) throw TimeoutError("ILP solver exceeded its time limit");
    LpSolution sol = parse_lp_solution(p.output, ilp);
    if (sol.status == SolverStatus::kUnknown && sol.values.empty())
        throw ConfigError("ILP solver produced no result (exit code " + std::to_string(p.exit_code) + ")");
    return sol;
}

}  // namespace mcid
