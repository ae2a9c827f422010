#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dgg {

// Common base so callers (and the CLI exit-code mapping) can catch every
// library failure with one handler.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidInput : public Error {
    using Error::Error;
};

class InsufficientEnvironments : public Error {
    using Error::Error;
};

class UndefinedCorrelation : public Error {
    using Error::Error;
};

class ValidationError : public Error {
    using Error::Error;
};

class DuplicateRecord : public Error {
    using Error::Error;
};

class IoError : public Error {
    using Error::Error;
};

// Rejection sampling could not reach its acceptance condition at a usable
// rate; reported instead of looping forever.
class GeneratorStarvation : public Error {
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Carries the exact (algorithm, seed, env) triples that are missing.
class IncompleteMatrix : public Error {
public:
    IncompleteMatrix(const std::string& what, std::vector<std::string> missing)
        : Error(what), missing_(std::move(missing)) {}

    const std::vector<std::string>& missing() const noexcept { return missing_; }

private:
    std::vector<std::string> missing_;
};

}  // namespace dgg
