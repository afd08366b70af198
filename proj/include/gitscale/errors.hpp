#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gitscale {

/// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The repository locator could not be opened or read.
class RepositoryError : public Error {
public:
    using Error::Error;
};

/// A persisted file violated its schema; carries the 1-based line number.
class SchemaError : public Error {
public:
    SchemaError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyRecordStream : public Error {
public:
    EmptyRecordStream() : Error("empty record stream") {}
};

/// Too few points, or no spread in x, to fit a regression.
class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& detail = {})
        : Error(detail.empty() ? "insufficient data" : "insufficient data: " + detail) {}
};

/// Every paired difference was zero, so a signed-rank test has nothing to rank.
class DegeneratePairs : public Error {
public:
    explicit DegeneratePairs(const std::string& detail = {})
        : Error(detail.empty() ? "degenerate pairs" : "degenerate pairs: " + detail) {}
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace gitscale
