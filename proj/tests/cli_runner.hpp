#pragma once

// Spawns the CLI binary, captures stdout and the exit code. stderr is
// dropped (human diagnostics only).

#include <cstdio>
#include <cstdlib>
#include <string>

#include <sys/wait.h>

#ifndef ADDREP_CLI_PATH
#error "ADDREP_CLI_PATH must be defined by the build"
#endif

struct CliResult {
    int code = -1;
    std::string out;
};

inline CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(ADDREP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    CliResult result;
    if (!pipe) return result;
    char buf[4096];
    std::size_t n;
    while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
    int status = ::pclose(pipe);
    if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
    return result;
}

// Unique scratch directory per test process.
inline std::string test_dir() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/addrep_tests_XXXXXX";
        char* made = ::mkdtemp(tmpl);
        return std::string(made ? made : "/tmp");
    }();
    return dir;
}
