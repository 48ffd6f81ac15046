#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rsmt::detail {

struct ProcessResult {
  bool launched = false;
  bool timed_out = false;
  bool exited = false;  // false when killed by a signal
  int exit_code = -1;
  int signal = 0;
  std::string out;
  std::string err;
};

// Runs `command` with /bin/sh -c, feeding `input` on stdin and collecting
// stdout/stderr until the child exits. The child is killed once `timeout`
// elapses. Safe to call from several threads at once.
ProcessResult run_shell(const std::string& command, std::string_view input,
                        std::chrono::duration<double> timeout);

}  // namespace rsmt::detail
