#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace nodetsp {

struct ProcessResult {
  int exit_code = -1;      // valid when !timed_out && signal == 0
  int signal = 0;
  bool timed_out = false;
  std::string output;      // combined stdout+stderr, truncated to the last 8 KiB

  bool ok() const noexcept { return !timed_out && signal == 0 && exit_code == 0; }
};

// Runs `command` through /bin/sh -c in its own process group. On timeout the
// whole group is killed with SIGKILL.
ProcessResult run_shell(const std::string& command, const std::filesystem::path& cwd,
                        std::chrono::milliseconds timeout);

// POSIX single-quote escaping for interpolating paths into shell commands.
std::string shell_quote(const std::string& arg);

}  // namespace nodetsp
