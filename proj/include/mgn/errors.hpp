#ifndef MGN_ERRORS_HPP
#define MGN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mgn {

// (g, n) violates 2g - 2 + n > 0, or a key operation received such a pair.
class InstabilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Correlator keys with no marked points are not supported.
class EmptyKeyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed correlator expression; offset is the byte position of the
// first offending character.
class SyntaxError : public std::invalid_argument {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : std::invalid_argument(what + " (byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// A class name outside the supported grammar (anything but kappa1/tau).
class UnknownClassError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

// Request exceeds a configured safety bound.
class BoundExceeded : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class InvalidDomain : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A truncated integral or accelerated series could not meet the
// requested tolerance.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// recursion_terms called on a base-case key.
class BaseCaseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mgn

#endif
