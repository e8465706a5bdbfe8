#pragma once

#include <stdexcept>
#include <string>

namespace irb {

/// Caller passed an argument outside an operation's contract.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A file or directory could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data violates its format or an integrity invariant.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Image patch without any nonzero pixel; moments and centroid are undefined.
class DegeneratePatch : public std::domain_error {
public:
    DegeneratePatch() : std::domain_error("patch has no nonzero pixel") {}
};

} // namespace irb
