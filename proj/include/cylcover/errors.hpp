#pragma once

#include <stdexcept>
#include <string>

namespace cylcover {

// Caller passed arguments outside an operation's domain. CLI maps this to exit 1.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// A configured resource cap was exceeded (candidate lattice too large,
// line-event safety cap hit). CLI maps this to exit 2.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cylcover
