#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bignet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `offset` is the byte offset into the parsed string.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), detail_(what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }
    /// Message without the offset suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
};

class UnsupportedFeatureError : public Error {
public:
    using Error::Error;
};

/// Geometry with zero extent where a positive extent is required.
class DegenerateImageError : public Error {
public:
    using Error::Error;
};

/// Violated precondition on shapes, labels or normalization state.
class ContractError : public Error {
public:
    using Error::Error;
};

class InfeasibleRulesetError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class LoadError : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace bignet
