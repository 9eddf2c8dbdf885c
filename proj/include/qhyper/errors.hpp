#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qhyper {

enum class ErrorKind {
    DivisionByZero,
    Pole,
    NoConvergence,
    BackendMismatch,
    Range,
    InfiniteDomain,
    ConstraintViolated,
    Schema,
    SamplingExhausted,
    Mismatch,
    Config,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. The kind is what callers branch on;
/// the message carries coordinates and values for diagnosis.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace qhyper
