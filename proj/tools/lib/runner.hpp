#pragma once

#include <map>

#include "config.hpp"
#include "report_json.hpp"

namespace codazzi::cli {

/// Result of one command: the JSON report, the process exit code
/// (0 = all checks pass, 1 = a verification failed, 2 = config/domain error),
/// and any CSV artifacts keyed by file name.
struct RunResult {
    Json report;
    int exit_code = 0;
    std::map<std::string, std::string> csv_files;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "verify-codazzi", "analyze-eigen", "check-conditions",
        "detect-warped",  "characteristics", "reproduce-paper"};
    return names;
}

/// Execute one command. Configuration and domain errors are captured into the
/// report with exit code 2 rather than thrown.
RunResult run_command(const std::string& command, const RunConfig& cfg);

/// Write report.json / report.csv / CSV artifacts to cfg.out_dir according to
/// cfg.format. No-op when out_dir is empty.
void write_outputs(const RunResult& result, const RunConfig& cfg);

} // namespace codazzi::cli
