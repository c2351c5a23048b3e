#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pseudopoisson {

/// Base of every error thrown by the library. `kind()` is the stable tag the
/// CLI prints next to the message.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

/// Argument outside the parameter or data domain.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "DomainError"; }
};

/// Malformed CSV input; the message names the offending row.
class ParseError : public DomainError {
public:
    ParseError(std::size_t row, const std::string& what)
        : DomainError("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }
    const char* kind() const noexcept override { return "ParseError"; }

private:
    std::size_t row_;
};

/// M1 = 0: the estimating equations have no solution.
class NoEstimateError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "NoEstimateError"; }
};

/// lambda2 and lambda3 are only identified through lambda2 + lambda3*x1.
class NonIdentifiableError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "NonIdentifiableError"; }
};

/// The data have zero likelihood under the requested model.
class InfeasibleError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "InfeasibleError"; }
};

/// A numerical procedure failed to reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "ConvergenceError"; }
};

/// Too many bootstrap replicates failed to produce a fit.
class UnreliableBootstrapError : public ConvergenceError {
public:
    UnreliableBootstrapError(std::size_t failed, std::size_t total)
        : ConvergenceError("bootstrap: " + std::to_string(failed) + " of " +
                           std::to_string(total) + " replicates failed to fit"),
          failed_(failed),
          total_(total) {}
    std::size_t failed() const noexcept { return failed_; }
    std::size_t total() const noexcept { return total_; }
    const char* kind() const noexcept override { return "UnreliableBootstrapError"; }

private:
    std::size_t failed_;
    std::size_t total_;
};

}  // namespace pseudopoisson
