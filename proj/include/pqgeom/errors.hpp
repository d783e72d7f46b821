#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pqgeom {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed DSL text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// A field hit a pole (division by zero, log/sqrt outside its domain, non-finite value).
class EvalError : public Error {
public:
    using Error::Error;
};

/// A sample point where the geometry is unusable (singular metric, wrong signature).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Spec-file or ManifoldSpec validation failure. `line` is 0 when not tied to a line.
class SpecError : public Error {
public:
    explicit SpecError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Caller asked for something the artifact does not provide (unknown catalog entry, check name, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace pqgeom
