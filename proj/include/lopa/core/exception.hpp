// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_CORE_EXCEPTION_HPP_
#define LOPA_CORE_EXCEPTION_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lopa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand sizes are not conformal.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what)
        : Error("dimension mismatch: " + what)
    {}
};

/// The executor has no implementation of the requested kernel.
class KernelNotImplemented : public Error {
public:
    KernelNotImplemented(const std::string& kernel, const std::string& executor)
        : Error("kernel '" + kernel + "' is not implemented for the " +
                executor + " executor")
    {}
};

/// The requested combination of types, formats or fields is not supported.
class NotSupported : public Error {
public:
    explicit NotSupported(const std::string& what)
        : Error("not supported: " + what)
    {}
};

/// A factory or criterion received an invalid parameter.
class BadParameter : public Error {
public:
    explicit BadParameter(const std::string& what)
        : Error("bad parameter: " + what)
    {}
};

/// A factorization or inversion hit a zero pivot.
class Singular : public Error {
public:
    Singular(const std::string& what, std::size_t index)
        : Error("singular: " + what + " (index " + std::to_string(index) + ")"),
          index_{index}
    {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Malformed input while reading a file or stream.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("parse error at line " + std::to_string(line) + ": " + what),
          line_{line}
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A result was queried before it was produced.
class NotReady : public Error {
public:
    explicit NotReady(const std::string& what) : Error("not ready: " + what) {}
};

/// An object was used in a way its passing mode forbids (e.g. after give).
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& what)
        : Error("contract violation: " + what)
    {}
};

/// Executor construction or selection error.
class InvalidExecutor : public Error {
public:
    explicit InvalidExecutor(const std::string& what)
        : Error("invalid executor: " + what)
    {}
};

/// Memory could not be allocated.
class AllocationError : public Error {
public:
    explicit AllocationError(std::size_t bytes)
        : Error("failed to allocate " + std::to_string(bytes) + " bytes")
    {}
};


}  // namespace lopa

#endif  // LOPA_CORE_EXCEPTION_HPP_
