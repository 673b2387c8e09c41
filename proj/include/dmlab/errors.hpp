#pragma once

#include <stdexcept>
#include <string>

namespace dmlab {

// Input outside the documented range of an operation.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Request would exceed a memory, point or enumeration budget.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature grid too coarse for the requested moment order.
class NyquistError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace dmlab
