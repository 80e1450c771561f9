#pragma once

#include <stdexcept>
#include <string>

namespace spider {

// Domain-specific error types. Everything derives from std::runtime_error so
// callers can catch broadly at the CLI boundary.

struct ProbabilityMassError : std::runtime_error {
    explicit ProbabilityMassError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EllipticityError : std::runtime_error {
    explicit EllipticityError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoRootError : std::runtime_error {
    explicit NoRootError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyRangeError : std::runtime_error {
    explicit EmptyRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct WindowTooSmallError : std::runtime_error {
    explicit WindowTooSmallError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotAnchoredError : std::runtime_error {
    explicit NotAnchoredError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DisconnectedError : std::runtime_error {
    explicit DisconnectedError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoForwardEdgeError : std::runtime_error {
    explicit NoForwardEdgeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidStateError : std::runtime_error {
    explicit InvalidStateError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DeadlockError : std::runtime_error {
    explicit DeadlockError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PathFailure : std::runtime_error {
    explicit PathFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct TooLargeError : std::runtime_error {
    explicit TooLargeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DisconnectedWindowError : std::runtime_error {
    explicit DisconnectedWindowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace spider
