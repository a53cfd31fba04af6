#pragma once
// Error taxonomy.  Each class maps to a fixed process exit code so shell
// callers can distinguish failure modes:
//
//   0  success
//   2  usage_error     -- bad flags, malformed alpha/config, caller contract breach
//   3  domain_error    -- inputs outside the mathematical domain (theta <= 3/4, n = 0, ...)
//   4  resource_error  -- a requested table/convolution exceeds the configured budget
//   5  invariant_error -- an internal consistency check failed; always a bug

#include <stdexcept>
#include <string>

namespace wgsum {

struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& m) : std::runtime_error(m) {}
};

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& m) : std::runtime_error(m) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& m) : std::runtime_error(m) {}
};

struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& m) : std::runtime_error(m) {}
};

enum ExitCode {
    EXIT_OK = 0,
    EXIT_USAGE = 2,
    EXIT_DOMAIN = 3,
    EXIT_RESOURCE = 4,
    EXIT_INVARIANT = 5,
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw invariant_error(msg);
}

} // namespace wgsum
