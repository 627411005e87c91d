#pragma once

#include <stdexcept>
#include <string>

namespace rdbandit {

// Malformed numeric input: bad probability vectors, shape mismatches,
// arguments outside a documented domain.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or incomplete experiment configuration. `line` is 0 when the
// problem is not tied to a specific line (e.g. a missing key).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An instance on which a quantity is undefined (e.g. all distortions zero
// when computing the minimum positive distortion).
class DegenerateInstance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace rdbandit
