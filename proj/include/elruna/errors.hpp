#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elruna {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. Line numbers are 1-based; 0 means "whole input".
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A size or parameter precondition does not hold (t_max = 0, n1 > n2, too much noise...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace elruna
