#pragma once

#include <stdexcept>
#include <string>

namespace selfnorm {

// Invalid user-supplied configuration (distribution parameters, config files).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Arguments outside an operation's domain (empty walk, window outside a path, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Resource limits exceeded (walk longer than the configured cap, window past the
// generated sequence).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace selfnorm
