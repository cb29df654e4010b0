#pragma once

#include <stdexcept>
#include <string>

namespace hazsearch {

// Bad input data: malformed config files, inconsistent automata, infeasible
// nominal sequences.  The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// API misuse: mismatched dimensions, out-of-order optimizer calls, values
// outside documented domains.  Also exit code 1 at the CLI boundary.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hazsearch
