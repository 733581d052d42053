#ifndef METARANK_ERROR_HPP
#define METARANK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace metarank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed bifiltration text. Carries the 1-based line number.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input that parses but does not describe a valid bifiltration.
class ValidationError : public Error
{
public:
    using Error::Error;
};

/// A broken internal invariant. Always a bug, never a user error.
class InternalError : public Error
{
public:
    using Error::Error;
};

} // namespace metarank

#endif
