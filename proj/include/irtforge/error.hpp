#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irtforge {

// Base class for every error raised by the library. Callers that only need
// a message catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input. Carries the offending file and 1-based
// line when known (line 0 means "whole file").
class InputError : public Error {
public:
    InputError(std::string path, std::size_t line, const std::string& what)
        : Error(format(path, line, what)), path_(std::move(path)), line_(line) {}

    explicit InputError(const std::string& what) : Error(what) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& path, std::size_t line, const std::string& what) {
        if (path.empty()) return what;
        if (line == 0) return path + ": " + what;
        return path + ":" + std::to_string(line) + ": " + what;
    }

    std::string path_;
    std::size_t line_ = 0;
};

// Violated precondition on an in-memory argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace irtforge
