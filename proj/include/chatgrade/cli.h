#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "chatgrade/completion.h"

namespace chatgrade {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
};

// Everything the command line touches outside its arguments.
struct CliContext {
  EnvLookup env = system_env();
  std::function<std::unique_ptr<Transport>()> make_transport;  // defaults to HttpTransport
  Sleeper sleep = thread_sleeper();
  std::ostream* out = nullptr;  // defaults to std::cout
  std::ostream* err = nullptr;  // defaults to std::cerr
};

// argv[0] is the program name. Subcommands: generate, score, report.
int run(const std::vector<std::string>& argv, const CliContext& ctx = {});

}  // namespace chatgrade
