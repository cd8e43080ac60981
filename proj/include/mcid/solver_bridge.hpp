#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>

#include "mcid/formats.hpp"

namespace mcid {

/// External solver invocation. `command` is run through /bin/sh with "{input}" replaced by
/// the instance path and "{output}" by a result path; without "{output}" the solver's
/// standard output is captured instead.
struct SolverCommand {
    std::string command;
    std::chrono::milliseconds timeout{600'000};
    std::filesystem::path work_dir;  // defaults to the system temp directory
    bool keep_files = false;
};

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string output;  // output file contents, or captured stdout
};

/// Writes `input_text` to a file, runs the command, and collects the output.
ProcessResult run_solver(const SolverCommand& cmd, const std::string& input_text, const std::string& input_suffix);

/// Runs a MaxSAT solver on the instance. Throws TimeoutError, or ConfigError when the solver
/// fails or prints neither a status nor a model.
MaxSatOutput run_maxsat_solver(const SolverCommand& cmd, const WcnfInstance& instance);

/// Runs an ILP solver on the LP text of the instance.
LpSolution run_ilp_solver(const SolverCommand& cmd, const IlpInstance& ilp);

}  // namespace mcid
