#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

inline std::string corpus_path(const std::string& name) {
    return std::string(GOOD_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ProcessResult {
    int exit_code = -1;
    std::string output; // stdout only
};

/// Run a command, capture stdout, return the exit code. stderr goes to the
/// test log.
inline ProcessResult run_process(const std::string& command) {
    ProcessResult r;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
    int status = pclose(pipe);
    if (status >= 0 && WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
    return r;
}

} // namespace testutil
