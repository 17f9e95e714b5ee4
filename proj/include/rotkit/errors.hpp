#pragma once

#include <stdexcept>
#include <string>

namespace rotkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter or argument lies outside the domain where the map is defined.
class DomainError : public Error {
public:
    enum class Kind { quad, a_interval, argument };

    DomainError(Kind kind, std::string inequality)
        : Error("domain error: " + inequality + " violated"),
          kind_(kind), inequality_(std::move(inequality)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& inequality() const noexcept { return inequality_; }

private:
    Kind kind_;
    std::string inequality_;
};

/// A series cannot be truncated with a certified tail at the configured cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// enter_X ran past its iteration cap. Finite entry is guaranteed for valid
/// parameters, so this indicates an internal inconsistency.
class IterationLimit : public Error {
public:
    using Error::Error;
};

/// A computed object failed its own consistency check (e.g. a cycle built
/// from phi does not close under iteration of the map).
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace rotkit
