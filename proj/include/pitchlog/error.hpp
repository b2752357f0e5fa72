#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pitchlog {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the source name and 1-based line (0 when unknown).
class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

/// A file could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A data-model invariant was violated (duplicate ids, dangling relations, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

/// A caller asked for something that does not exist (unknown id, attribute, ...).
class LookupError : public Error {
public:
    using Error::Error;
};

/// Bad configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pitchlog
