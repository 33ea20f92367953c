#pragma once

#include <ostream>

namespace cmgn::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kValidation = 4,
};

// Entry point of the `cmgn` tool. Subcommands: genbank, quantize, inject,
// blut-inspect, measure, demo.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmgn::cli
