#pragma once

#include <stdexcept>
#include <string>

namespace confweave {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DepthExceededError : Error {
    std::string path;
    explicit DepthExceededError(std::string p)
        : Error("requirement chain exceeds depth limit at '" + p + "'"), path(std::move(p)) {}
};

struct UnknownVariableError : Error {
    std::string name;
    explicit UnknownVariableError(std::string n)
        : Error("unknown variable '" + n + "'"), name(std::move(n)) {}
};

struct InvalidPreferenceError : Error {
    using Error::Error;
};

struct MalformedAssignmentError : Error {
    using Error::Error;
};

struct EmptyModelError : Error {
    using Error::Error;
};

} // namespace confweave
