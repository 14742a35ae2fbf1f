#pragma once

#include <stdexcept>
#include <string>

namespace cflow {

// Bad or self-contradictory configuration. CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A required upstream stage output is missing. CLI maps this to exit 3.
struct MissingArtifact : std::runtime_error {
    explicit MissingArtifact(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cflow
