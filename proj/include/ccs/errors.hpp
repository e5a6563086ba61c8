#pragma once

#include <stdexcept>
#include <string>

namespace ccs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InverseOfZero : Error {
    InverseOfZero() : Error("multiplicative inverse of zero") {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

struct FieldTooSmall : Error {
    explicit FieldTooSmall(const std::string& what) : Error(what) {}
};

struct AlphabetUnsupported : Error {
    explicit AlphabetUnsupported(const std::string& what) : Error(what) {}
};

struct SearchSpaceTooLarge : Error {
    explicit SearchSpaceTooLarge(const std::string& what) : Error(what) {}
};

struct RateInfeasible : Error {
    explicit RateInfeasible(const std::string& what) : Error(what) {}
};

struct NotOnGrid : Error {
    explicit NotOnGrid(const std::string& what) : Error(what) {}
};

struct Unachievable : Error {
    explicit Unachievable(const std::string& what) : Error(what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace ccs
