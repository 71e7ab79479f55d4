#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evsim {

/// Malformed or inconsistent input data, tagged with its origin.
class InputError : public std::runtime_error {
public:
    InputError(std::string file, std::size_t line, const std::string& message)
        : std::runtime_error(file.empty() ? message
                                          : file + (line ? ":" + std::to_string(line) : std::string{}) +
                                                ": " + message),
          file_(std::move(file)), line_(line), detail_(message)
    {
    }

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string file_;
    std::size_t line_;
    std::string detail_;
};

/// Values that parse but violate a domain invariant (non-positive capacity, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace evsim
