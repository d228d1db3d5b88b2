#pragma once

// Spawns a shell command and captures its combined output and exit code.
// Used by the CLI tests and the acceptance runner to drive the installed
// binary exactly the way a user would.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace proc_util {

struct ProcResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

inline ProcResult run_command(const std::string& command) {
  ProcResult result;
  const std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (!pipe) return result;
  char buffer[4096];
  size_t got = 0;
  while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

/// Scratch path under the system temp directory, namespaced per test binary.
inline std::string temp_path(const std::string& prefix, const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / prefix;
  fs::create_directories(dir);
  return (dir / name).string();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace proc_util
