#pragma once

#include "samweb/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace samweb::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct CommandResult {
    std::string command;
    bool errored = false;
    std::string error;   // message when errored
    std::string summary; // one-line human summary
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
};

struct Report {
    JobConfig config;
    std::vector<CommandResult> results;
    double elapsed_seconds = 0.0; // text output only; excluded from JSON
    bool any_errors = false;
};

// Executes the command list in order. Verdicts are results, not errors;
// per-command computation failures are embedded and flagged.
Report run(const JobConfig& config);

// Deterministic JSON bytes for fixed config and tool version (timing is kept
// out on purpose so repeated runs compare equal).
std::string to_json(const Report& report);
std::string to_text(const Report& report);

// Writes CSV polylines (header x,y, 6-decimal fixed point) for every traced
// hexagon and level curve of the report's commands.
void write_plot_files(const Report& report, const std::string& plot_dir);

// Full CLI entry: parse args, load config, run, emit. Returns the process
// exit code (0 ok, 1 config error, 2 runtime error).
int main_impl(const std::vector<std::string>& args, std::string& out, std::string& err);

} // namespace samweb::cli
