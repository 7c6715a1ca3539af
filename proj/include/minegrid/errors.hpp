#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace minegrid {

/// Base of every error raised by the library. Callers that only need a
/// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument outside the operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A lookup (tariff hour, network snapshot) that has no data.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Segment envelope or dwell rule violated.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// A comparison that is undefined for its inputs (e.g. a zero baseline).
class ComparisonError : public Error {
public:
    using Error::Error;
};

/// Demand exceeds the offered supply.
class ShortageError : public Error {
public:
    ShortageError(std::string what, double deficit_mw)
        : Error(std::move(what)), deficit_mw_(deficit_mw) {}

    double deficit_mw() const noexcept { return deficit_mw_; }

private:
    double deficit_mw_;
};

/// Malformed input file content. `line` is 1-based; 0 when the error is
/// not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, const std::string& detail)
        : Error(format(path, line, detail)), path_(std::move(path)), line_(line), detail_(detail) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(const std::string& path, std::size_t line, const std::string& detail) {
        std::string out = path;
        if (line > 0) out += ":" + std::to_string(line);
        return out + ": " + detail;
    }

    std::string path_;
    std::size_t line_;
    std::string detail_;
};

/// Timestamps out of order or with a non-uniform spacing.
class CadenceError : public ParseError {
public:
    using ParseError::ParseError;
};

/// File missing, unreadable or unwritable.
class IoError : public Error {
public:
    IoError(std::string path, const std::string& detail)
        : Error(path + ": " + detail), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Rethrows `e` as the same concrete type with `context` prepended.
[[noreturn]] inline void rethrow_with_context(const Error& e, const std::string& context) {
    const std::string msg = context + ": " + e.what();
    if (auto* p = dynamic_cast<const ShortageError*>(&e)) throw ShortageError(msg, p->deficit_mw());
    if (auto* p = dynamic_cast<const CadenceError*>(&e))
        throw CadenceError(p->path(), p->line(), context + ": " + p->detail());
    if (auto* p = dynamic_cast<const ParseError*>(&e))
        throw ParseError(p->path(), p->line(), context + ": " + p->detail());
    if (auto* p = dynamic_cast<const IoError*>(&e)) throw IoError(p->path(), msg);
    if (dynamic_cast<const DomainError*>(&e)) throw DomainError(msg);
    if (dynamic_cast<const LookupError*>(&e)) throw LookupError(msg);
    if (dynamic_cast<const ConstraintError*>(&e)) throw ConstraintError(msg);
    if (dynamic_cast<const ComparisonError*>(&e)) throw ComparisonError(msg);
    throw Error(msg);
}

}  // namespace minegrid
