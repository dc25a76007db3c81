#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

// Runs the CLI binary under a shell, capturing stdout and the exit code.
// Tests suppress or merge stderr explicitly via the args string.

namespace usd::testing {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

inline CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STUBBORN_USD_CLI_PATH) + " " + args;
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
    const int status = pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

}  // namespace usd::testing
