#ifndef EIGENEXPR_ERROR_HPP
#define EIGENEXPR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eigenexpr {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape or length disagreement between operands.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Invalid argument value, degenerate data, or violated precondition.
class ValueError : public Error {
public:
    explicit ValueError(const std::string& msg) : Error(msg) {}
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), residual_(residual) {}

    double residual() const { return residual_; }

private:
    double residual_;
};

/// Filesystem-level failure: missing, unreadable, or unwritable path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Malformed file contents: bad magic, truncated data, version or
/// checksum mismatch, unparseable fields.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

} // namespace eigenexpr

#endif // EIGENEXPR_ERROR_HPP
