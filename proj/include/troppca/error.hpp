#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace troppca {

// Malformed text input (Newick, JSON, CSV). Carries a byte offset into the
// offending text and, when known, the 1-based line of the input file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset, std::size_t line = 0)
        : std::runtime_error(what), offset_(offset), line_(line) {}

    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t offset_;
    std::size_t line_;
};

// Arguments that violate an operation's precondition: dimension mismatch,
// empty samples, leaf-set disagreement, and so on.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Valid input that cannot be processed numerically: non-equidistant trees,
// oversized LP instances, a point that is not Fermat-Weber optimal.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace troppca
