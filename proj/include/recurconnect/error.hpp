#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recurconnect {

/// Failure in the data or in a numerical precondition (bad CSV record, zero
/// variance, too few lags, ...). The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed CSV input; carries the 1-based line number of the offending record.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& message, const std::string& source = {})
        : DataError((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " +
                    message),
          line_(line),
          message_(message) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::size_t line_;
    std::string message_;
};

/// Invalid arguments or parameters supplied by the caller (exit code 2 in the CLI).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace recurconnect
