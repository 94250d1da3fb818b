#pragma once

// The qcp command line, as a library so the test suite can drive it in
// process. Exit codes: 0 ok, 2 input error, 3 resource cap, 4 invariant
// violation.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qcomm::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kCapExceeded = 3, kInvariantViolation = 4 };

struct Environment {
  std::optional<std::string> capQubits;      // QCP_CAP_QUBITS
  std::function<std::string()> clock;       // ISO 8601 UTC timestamp; defaults to the system clock
};

/// args excludes the program name.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
           const Environment& env = {});

/// Environment read from the process (getenv).
Environment processEnvironment();

}  // namespace qcomm::cli
