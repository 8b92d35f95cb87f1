#pragma once

#include <stdexcept>
#include <string>

namespace mstopics {

// Input data or parameters failed validation. The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A required upstream artifact is absent. The CLI maps this to exit code 3.
struct MissingArtifactError : std::runtime_error {
    explicit MissingArtifactError(std::string p)
        : std::runtime_error("missing artifact: " + p), path(std::move(p)) {}
    std::string path;
};

// Numerical accuracy fell outside guaranteed bounds. The CLI maps this to exit code 4.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mstopics
