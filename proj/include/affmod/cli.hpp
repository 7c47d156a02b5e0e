#pragma once

#include <string>
#include <vector>

namespace affmod {

// affmod <command> --job <path> [--out <path>] [--seed <n>] [--timing]
// exit 0 = ok, 1 = verification failure, 2 = input error, 3 = incomplete.
int run(const std::vector<std::string>& args);

// In-process entry for tests: returns the exit code and the report text.
int run_job_text(const std::string& job_json, std::string& report_json,
                 uint64_t seed = 1, bool timing = false);

} // namespace affmod
