#pragma once

#include <stdexcept>
#include <string>

namespace fraclog {

/// Category of a failure. The CLI maps these onto process exit codes.
enum class ErrorKind {
    configuration,
    domain,
    admissibility,
    numerical,
    monotonicity_violation,
    comparison_violation,
    barrier_violation,
    insufficient_data,
    precondition,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fraclog
