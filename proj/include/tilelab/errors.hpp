#pragma once

#include <stdexcept>
#include <string>

namespace tilelab {

// Domain failures (exit code 1 in the CLI).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GenerationError : DomainError {
    explicit GenerationError(const std::string& msg) : DomainError(msg) {}
};

struct PlacementError : DomainError {
    explicit PlacementError(const std::string& msg) : DomainError(msg) {}
};

struct RenderError : DomainError {
    explicit RenderError(const std::string& msg) : DomainError(msg) {}
};

struct ParseError : DomainError {
    explicit ParseError(const std::string& msg) : DomainError(msg) {}
};

// I/O failures (exit code 2 in the CLI, same as argument errors).
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tilelab
