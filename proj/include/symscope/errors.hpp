#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symscope {

// Malformed textual input (cycle strings, DIMACS, partition files).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    explicit ParseError(const std::string& what)
        : std::runtime_error(what), position_(0) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// A documented precondition or invariant was violated by the caller.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A hard size bound of a brute-force oracle was exceeded.
class BoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace symscope
